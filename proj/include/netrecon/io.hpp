#ifndef NETRECON_IO_HPP_
#define NETRECON_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "netrecon/ipfp.hpp"
#include "netrecon/metrics.hpp"
#include "netrecon/types.hpp"

namespace netrecon {

inline constexpr int kSchemaVersion = 1;

/// Shortest decimal text that round-trips the double exactly.
std::string format_double(double v);

// Matrix CSV: n header-less rows of n comma-separated values. The
// diagonal is written as 0 and ignored on read.
void write_matrix_csv(const std::filesystem::path& file, const MatrixRef& m);
Matrix read_matrix_csv(const std::filesystem::path& file);

// Edge-list CSV with header `t,src,dst,value`; missing dyads are zero.
void write_edge_list_csv(const std::filesystem::path& file,
                         const std::vector<WeightedNetwork>& networks);
std::vector<WeightedNetwork> read_edge_list_csv(const std::filesystem::path& file,
                                                Index n = 0, Index t_count = 0);

// Single-column CSV of per-node values.
void write_vector_csv(const std::filesystem::path& file, const Vector& v);
Vector read_vector_csv(const std::filesystem::path& file);

/// Dataset directory: manifest.json, one matrix CSV per time point,
/// optional covariate CSVs, optional per-node gdp column, plus an
/// edge-list export of the whole series.
void save_dataset(const std::filesystem::path& dir, const TimeSeriesDataset& ds,
                  const Vector& gdp, std::uint64_t seed, const std::string& config_json);
struct LoadedDataset {
  TimeSeriesDataset dataset;
  Vector gdp;  // size 0 when absent
  std::uint64_t seed = 0;
};
LoadedDataset load_dataset(const std::filesystem::path& dir);

/// IpfpResult: effects and beta inline in JSON, mu as a matrix CSV
/// side-file next to it.
void save_ipfp_result(const std::filesystem::path& json_file, const IpfpResult& r);

struct EnsembleManifest {
  double alpha = 0.0;
  double target = 0.0;
  std::uint64_t seed = 0;
  int n_samples = 0;
};

/// One matrix CSV per sample plus a JSON manifest.
void save_ensemble(const std::filesystem::path& dir,
                   const std::vector<std::pair<BinaryStructure, WeightedNetwork>>& ensemble,
                   const EnsembleManifest& manifest);

// Per-(method, time point) evaluation rows.
struct ReportRow {
  std::string method;
  int t = 0;
  std::string status;  // ok | skipped | failed
  std::string error;
  EvaluationReport metrics;
};

void write_report_csv(const std::filesystem::path& file, const std::vector<ReportRow>& rows);
std::vector<ReportRow> read_report_csv(const std::filesystem::path& file);

/// Long-format path output `tau,src,dst,mu` for external plotting.
void write_lasso_path_csv(const std::filesystem::path& file, const std::vector<double>& grid,
                          const std::vector<Matrix>& path);

}  // namespace netrecon

#endif  // NETRECON_IO_HPP_
