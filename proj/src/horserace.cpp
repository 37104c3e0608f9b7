#include "netrecon/horserace.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <future>

#include <json.hpp>

#include "netrecon/core.hpp"
#include "netrecon/gravity.hpp"
#include "netrecon/hierarchical.hpp"
#include "netrecon/ipfp.hpp"
#include "netrecon/lasso.hpp"
#include "netrecon/metrics.hpp"
#include "netrecon/rng.hpp"

namespace netrecon {

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = {
      Method::ipfp,        Method::ipfp_gdp,       Method::ipfp_lag,
      Method::gravity,     Method::dc_gravity,     Method::dc_gravity_gdp,
      Method::dc_gravity_lag, Method::tomogravity, Method::lasso,
      Method::h_er,        Method::h_fit,          Method::mindens,
  };
  return methods;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::ipfp: return "IPFP";
    case Method::ipfp_gdp: return "IPFP-GDP";
    case Method::ipfp_lag: return "IPFP-LAG";
    case Method::gravity: return "GRAVITY";
    case Method::dc_gravity: return "DC-GRAVITY";
    case Method::dc_gravity_gdp: return "DC-GRAVITY-GDP";
    case Method::dc_gravity_lag: return "DC-GRAVITY-LAG";
    case Method::tomogravity: return "TOMOGRAVITY";
    case Method::lasso: return "LASSO";
    case Method::h_er: return "H-ER";
    case Method::h_fit: return "H-FIT";
    case Method::mindens: return "MINDENS";
  }
  throw InvalidArgument("unknown method");
}

Method parse_method(const std::string& name) {
  for (const Method m : all_methods())
    if (method_name(m) == name) return m;
  throw InvalidArgument("unknown method '" + name + "'");
}

bool method_needs_lag(Method m) {
  return m == Method::ipfp_lag || m == Method::dc_gravity_lag;
}

namespace {

bool method_needs_gdp(Method m) {
  return m == Method::ipfp_gdp || m == Method::dc_gravity_gdp;
}

}  // namespace

DensityTarget density_for(const TimeSeriesDataset& ds, int t, const DensitySource& src) {
  if (!src.oracle) return DensityTarget(src.fixed);
  return DensityTarget(density(binarize(ds.networks[t])));
}

ReconstructionResult reconstruct_method(Method method, const TimeSeriesDataset& ds, int t,
                                        const DensityTarget& target,
                                        const HorseraceConfig& cfg) {
  const MarginalVector m = compute_marginals(ds.networks[t]);
  const std::uint64_t seed = derive_seed(cfg.rng_seed, method_name(method), t);

  if (method_needs_gdp(method) && ds.covariates.empty())
    throw InvalidArgument(method_name(method) + ": dataset has no covariates");
  if (method_needs_lag(method) && t < 1)
    throw InvalidArgument(method_name(method) + ": lag undefined at the first time point");

  switch (method) {
    case Method::ipfp: {
      IpfpResult r = ipfp_fit(m, nullptr, cfg.ipfp_tol, cfg.ipfp_max_iter);
      ReconstructionResult out;
      out.probabilities = poisson_edge_probabilities(r);
      out.mu = std::move(r.mu);
      return out;
    }
    case Method::ipfp_gdp:
    case Method::ipfp_lag: {
      const CovariateMatrix c = method == Method::ipfp_gdp
                                    ? ds.covariates[t]
                                    : covariate_lag_log(ds.networks[t - 1], 1.0);
      IpfpResult r = ipfp_covariate_fit(m, c, cfg.ipfp_tol, cfg.ipfp_max_iter);
      ReconstructionResult out;
      out.probabilities = poisson_edge_probabilities(r);
      out.mu = std::move(r.mu);
      return out;
    }
    case Method::gravity: {
      ReconstructionResult out;
      out.mu = gravity_fit(m);
      return out;
    }
    case Method::dc_gravity:
    case Method::dc_gravity_gdp:
    case Method::dc_gravity_lag: {
      FitnessSpec f = method == Method::dc_gravity ? FitnessSpec::marginal_product(m)
                      : method == Method::dc_gravity_gdp
                          ? FitnessSpec::from_covariate(ds.covariates[t])
                          : FitnessSpec::from_covariate(
                                covariate_lag_log(ds.networks[t - 1], 1.1));
      DcGravityResult r = dc_gravity_reconstruct(m, f, target, cfg.n_samples, seed);
      ReconstructionResult out;
      out.mu = std::move(r.point_estimate);
      out.probabilities = std::move(r.probabilities);
      out.ensemble = std::move(r.ensemble);
      out.calibrated_alpha = r.alpha.alpha;
      return out;
    }
    case Method::tomogravity: {
      ReconstructionResult out;
      out.mu = tomogravity_fit(m, cfg.tomogravity).mu;
      return out;
    }
    case Method::lasso: {
      ReconstructionResult out;
      out.mu = tau_search(m, target, lasso_default_grid(m, cfg.lasso_grid_points)).fit;
      return out;
    }
    case Method::h_er:
    case Method::h_fit: {
      HierarchicalConfig hc;
      hc.probability_model =
          method == Method::h_er ? ProbabilityModel::erdos_renyi : ProbabilityModel::fitness;
      hc.target_density = target.value();
      hc.n_samples = cfg.n_samples;
      hc.rng_seed = seed;
      const EdgeProbabilityMatrix p = method == Method::h_er
                                          ? er_probabilities(m.size(), target)
                                          : fit_probabilities(m, target);
      auto samples = sample_ensemble(m, p, hc);
      EnsemblePointEstimate est = ensemble_point_estimate(samples);
      ReconstructionResult out;
      out.mu = std::move(est.values);
      out.probabilities = p;
      out.ensemble = std::move(samples);
      return out;
    }
    case Method::mindens: {
      MindensConfig mc = cfg.mindens;
      mc.rng_seed = seed;
      auto ensemble = mindens_run(m, mc);
      ReconstructionResult out;
      out.mu = mindens_best(ensemble, m).values();
      out.ensemble.reserve(ensemble.size());
      for (auto& w : ensemble) {
        BinaryStructure z = binarize(w);
        out.ensemble.emplace_back(std::move(z), std::move(w));
      }
      return out;
    }
  }
  throw InvalidArgument("unknown method");
}

namespace {

ReportRow run_cell(const TimeSeriesDataset& ds, const HorseraceConfig& cfg, Method method,
                   int t) {
  ReportRow row;
  row.method = method_name(method);
  row.t = t;
  if (method_needs_lag(method) && t < 1) {
    row.status = "skipped";
    row.error = "lag undefined at first time point";
    return row;
  }
  try {
    const DensityTarget target = density_for(ds, t, cfg.density_source);
    const ReconstructionResult rec = reconstruct_method(method, ds, t, target, cfg);
    row.metrics = evaluate(rec, ds.networks[t], target);
    row.status = "ok";
  } catch (const Error& e) {
    row.status = "failed";
    row.error = e.what();
  }
  return row;
}

struct Welford {
  int n = 0;
  double mean = 0.0, m2 = 0.0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  double se() const { return n > 1 ? std::sqrt(m2 / (n - 1)) / std::sqrt(double(n)) : 0.0; }
};

}  // namespace

HorseraceResult run_horserace(const TimeSeriesDataset& ds, const HorseraceConfig& cfg) {
  ds.validate();
  if (cfg.methods.empty()) throw InvalidArgument("horserace: methods must be non-empty");
  const int T = static_cast<int>(ds.time_points());

  HorseraceResult result;
  result.rows.resize(cfg.methods.size() * static_cast<size_t>(T));
  const auto slot = [&](size_t mi, int t) { return mi * static_cast<size_t>(T) + t; };

  if (cfg.jobs > 1) {
    std::vector<std::future<void>> futures;
    std::atomic<size_t> next{0};
    const size_t total = result.rows.size();
    const int workers = std::min<int>(cfg.jobs, static_cast<int>(total));
    for (int w = 0; w < workers; ++w)
      futures.push_back(std::async(std::launch::async, [&]() {
        for (size_t k = next.fetch_add(1); k < total; k = next.fetch_add(1)) {
          const size_t mi = k / static_cast<size_t>(T);
          const int t = static_cast<int>(k % static_cast<size_t>(T));
          result.rows[slot(mi, t)] = run_cell(ds, cfg, cfg.methods[mi], t);
        }
      }));
    for (auto& f : futures) f.get();
  } else {
    for (size_t mi = 0; mi < cfg.methods.size(); ++mi)
      for (int t = 0; t < T; ++t) result.rows[slot(mi, t)] = run_cell(ds, cfg, cfg.methods[mi], t);
  }

  for (size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    MethodAggregate agg;
    agg.method = method_name(cfg.methods[mi]);
    Welford l1, l2, roc, pr, rod, rid, rel, unc_res;
    double l2_sq = 0.0;
    for (int t = 0; t < T; ++t) {
      const ReportRow& row = result.rows[slot(mi, t)];
      if (row.status != "ok") continue;
      const EvaluationReport& e = row.metrics;
      agg.overall_l1 += e.l1;
      l2_sq += e.l2 * e.l2;
      l1.add(e.l1);
      l2.add(e.l2);
      roc.add(e.auc_roc);
      pr.add(e.auc_pr);
      rod.add(e.rmse_outdeg);
      rid.add(e.rmse_indeg);
      rel.add(e.brier.reliability);
      unc_res.add(e.brier.uncertainty - e.brier.resolution);
    }
    agg.evaluated = l1.n;
    agg.overall_l2 = std::sqrt(l2_sq);
    agg.avg_l1 = l1.mean;
    agg.se_l1 = l1.se();
    agg.avg_l2 = l2.mean;
    agg.se_l2 = l2.se();
    agg.avg_auc_roc = roc.mean;
    agg.avg_auc_pr = pr.mean;
    agg.avg_rmse_outdeg = rod.mean;
    agg.avg_rmse_indeg = rid.mean;
    agg.avg_brier_rel = rel.mean;
    agg.avg_brier_unc_minus_res = unc_res.mean;
    result.aggregates.push_back(agg);
  }

  if (!cfg.output_dir.empty()) {
    const std::filesystem::path dir(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory: " + dir.string());
    write_report_csv(dir / "report.csv", result.rows);
    write_aggregate_json(dir / "aggregate.json", result.aggregates);
  }
  return result;
}

void write_aggregate_json(const std::filesystem::path& file,
                          const std::vector<MethodAggregate>& aggregates) {
  nlohmann::json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "horserace_aggregate";
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& a : aggregates) {
    nlohmann::json r;
    r["method"] = a.method;
    r["evaluated"] = a.evaluated;
    r["overall_l1"] = a.overall_l1;
    r["overall_l2"] = a.overall_l2;
    r["average_l1"] = a.avg_l1;
    r["se_l1"] = a.se_l1;
    r["average_l2"] = a.avg_l2;
    r["se_l2"] = a.se_l2;
    r["average_auc_roc"] = a.avg_auc_roc;
    r["average_auc_pr"] = a.avg_auc_pr;
    r["average_rmse_outdeg"] = a.avg_rmse_outdeg;
    r["average_rmse_indeg"] = a.avg_rmse_indeg;
    r["average_brier_reliability"] = a.avg_brier_rel;
    r["average_brier_unc_minus_res"] = a.avg_brier_unc_minus_res;
    rows.push_back(r);
  }
  doc["methods"] = rows;
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + file.string());
  out << doc.dump(2) << '\n';
}

}  // namespace netrecon
