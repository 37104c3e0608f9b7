#ifndef NETRECON_HORSERACE_HPP_
#define NETRECON_HORSERACE_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "netrecon/io.hpp"
#include "netrecon/mindens.hpp"
#include "netrecon/tomogravity.hpp"
#include "netrecon/types.hpp"

namespace netrecon {

enum class Method {
  ipfp,
  ipfp_gdp,
  ipfp_lag,
  gravity,
  dc_gravity,
  dc_gravity_gdp,
  dc_gravity_lag,
  tomogravity,
  lasso,
  h_er,
  h_fit,
  mindens,
};

const std::vector<Method>& all_methods();
std::string method_name(Method m);
Method parse_method(const std::string& name);
/// Lag-based methods have no covariate at the first time point.
bool method_needs_lag(Method m);

struct DensitySource {
  bool oracle = true;   // use the true density of each slice
  double fixed = 0.5;   // used when oracle is false

  static DensitySource oracle_source() { return {true, 0.0}; }
  static DensitySource fixed_source(double d) { return {false, d}; }
};

struct HorseraceConfig {
  std::vector<Method> methods = all_methods();
  DensitySource density_source;
  std::string output_dir;
  std::uint64_t rng_seed = 0;
  int n_samples = 50;          // ensemble size for sampling methods
  int lasso_grid_points = 30;
  double ipfp_tol = 1e-8;
  int ipfp_max_iter = 10000;
  TomogravityConfig tomogravity;
  MindensConfig mindens;
  int jobs = 1;
};

struct MethodAggregate {
  std::string method;
  int evaluated = 0;
  double overall_l1 = 0.0;  // sum of per-time L1
  double overall_l2 = 0.0;  // L2 over the stacked series: sqrt(sum of squared per-time L2)
  double avg_l1 = 0.0, se_l1 = 0.0;
  double avg_l2 = 0.0, se_l2 = 0.0;
  double avg_auc_roc = 0.0, avg_auc_pr = 0.0;
  double avg_rmse_outdeg = 0.0, avg_rmse_indeg = 0.0;
  double avg_brier_rel = 0.0, avg_brier_unc_minus_res = 0.0;
};

struct HorseraceResult {
  std::vector<ReportRow> rows;
  std::vector<MethodAggregate> aggregates;
};

/// Reconstructs one method at one time point from the observable inputs
/// (marginals, density target, covariates, lagged slice).
ReconstructionResult reconstruct_method(Method method, const TimeSeriesDataset& ds, int t,
                                        const DensityTarget& target,
                                        const HorseraceConfig& cfg);

/// Per-time density target according to the configured source.
DensityTarget density_for(const TimeSeriesDataset& ds, int t, const DensitySource& src);

/// Runs every configured method on every time point and evaluates each
/// against the true slice. Per-method failures are recorded in the rows
/// and do not abort the rest. When cfg.output_dir is set, writes
/// report.csv and aggregate.json there.
HorseraceResult run_horserace(const TimeSeriesDataset& ds, const HorseraceConfig& cfg);

void write_aggregate_json(const std::filesystem::path& file,
                          const std::vector<MethodAggregate>& aggregates);

/// Long-format CSV (metric, method, t, value) plus one self-contained SVG
/// line chart per metric. Metrics with no finite values are omitted and
/// listed in the plot manifest.
void emit_plots(const std::vector<ReportRow>& rows, const std::filesystem::path& dir);

}  // namespace netrecon

#endif  // NETRECON_HORSERACE_HPP_
