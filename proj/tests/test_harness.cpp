#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "netrecon/core.hpp"
#include "netrecon/generator.hpp"
#include "netrecon/horserace.hpp"
#include "netrecon/io.hpp"

using namespace netrecon;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("netrecon_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

GeneratorConfig small_config() {
  GeneratorConfig cfg;
  cfg.n = 12;
  cfg.T = 4;
  cfg.target_density = 0.6;
  cfg.rng_seed = 21;
  return cfg;
}

}  // namespace

TEST_CASE("generator reproducibility and invariants") {
  const GeneratorConfig cfg = small_config();
  const GeneratedSeries a = generate_series(cfg);
  const GeneratedSeries b = generate_series(cfg);
  REQUIRE(a.dataset.time_points() == 4);
  for (int t = 0; t < 4; ++t)
    CHECK((a.dataset.networks[t].values() - b.dataset.networks[t].values())
              .cwiseAbs()
              .maxCoeff() == 0.0);

  for (const auto& net : a.dataset.networks) {
    const MarginalVector m = compute_marginals(net);
    CHECK(std::abs(m.out_sums().sum() - m.in_sums().sum()) <=
          1e-9 * std::max(1.0, m.out_sums().sum()));
    CHECK(net.values().minCoeff() >= 0.0);
  }
  CHECK(a.gdp.minCoeff() >= 1.0);
}

TEST_CASE("frozen dynamics when persistence is one and trend is one") {
  GeneratorConfig cfg = small_config();
  cfg.persistence = 1.0;
  cfg.trend = 1.0;
  const GeneratedSeries s = generate_series(cfg);
  for (int t = 1; t < cfg.T; ++t)
    CHECK((s.dataset.networks[t].values() - s.dataset.networks[0].values())
              .cwiseAbs()
              .maxCoeff() == 0.0);
}

TEST_CASE("generated density tracks the target") {
  GeneratorConfig cfg;
  cfg.n = 40;
  cfg.T = 8;
  cfg.target_density = 0.7;
  cfg.rng_seed = 5;
  const GeneratedSeries s = generate_series(cfg);
  double mean = 0.0;
  for (const auto& net : s.dataset.networks) mean += density(binarize(net));
  mean /= cfg.T;
  CHECK(mean == doctest::Approx(0.7).epsilon(0.05));
}

TEST_CASE("presets") {
  const GeneratorConfig reduced = generator_preset("reduced");
  CHECK(reduced.n == 59);
  CHECK(reduced.target_density == 0.85);
  const GeneratorConfig full = generator_preset("full");
  CHECK(full.n == 203);
  CHECK(dyad_count(full.n) == 41006);
  const GeneratorConfig uniform = generator_preset("uniform-degree");
  CHECK(uniform.fitness_sigma < reduced.fitness_sigma);
  CHECK_THROWS_AS(generator_preset("nope"), InvalidArgument);
}

TEST_CASE("single-method horserace has one row per time point") {
  const GeneratedSeries s = generate_series(small_config());
  HorseraceConfig cfg;
  cfg.methods = {Method::gravity};
  cfg.rng_seed = 3;
  const HorseraceResult r = run_horserace(s.dataset, cfg);
  CHECK(r.rows.size() == 4);
  for (const auto& row : r.rows) {
    CHECK(row.method == "GRAVITY");
    CHECK(row.status == "ok");
  }
  REQUIRE(r.aggregates.size() == 1);
  CHECK(r.aggregates[0].evaluated == 4);
  double sum_l1 = 0.0;
  for (const auto& row : r.rows) sum_l1 += row.metrics.l1;
  CHECK(r.aggregates[0].overall_l1 == doctest::Approx(sum_l1).epsilon(1e-12));
}

TEST_CASE("lag methods are skipped at the first time point only") {
  const GeneratedSeries s = generate_series(small_config());
  HorseraceConfig cfg;
  cfg.methods = {Method::ipfp_lag, Method::gravity};
  cfg.n_samples = 4;
  const HorseraceResult r = run_horserace(s.dataset, cfg);
  int skipped = 0, ok_lag = 0;
  for (const auto& row : r.rows) {
    if (row.method == "IPFP-LAG" && row.status == "skipped") ++skipped;
    if (row.method == "IPFP-LAG" && row.status == "ok") ++ok_lag;
  }
  CHECK(skipped == 1);
  CHECK(ok_lag == 3);
}

TEST_CASE("single-time dataset: lag methods skipped, others run") {
  GeneratorConfig g = small_config();
  g.T = 1;
  const GeneratedSeries s = generate_series(g);
  HorseraceConfig cfg;
  cfg.methods = {Method::ipfp_lag, Method::dc_gravity_lag, Method::ipfp};
  cfg.n_samples = 4;
  const HorseraceResult r = run_horserace(s.dataset, cfg);
  REQUIRE(r.rows.size() == 3);
  for (const auto& row : r.rows) {
    if (row.method == "IPFP")
      CHECK(row.status == "ok");
    else
      CHECK(row.status == "skipped");
  }
}

TEST_CASE("with frozen dynamics the lag covariate dominates plain scaling") {
  GeneratorConfig g = small_config();
  g.persistence = 1.0;  // the lag is a perfect covariate up to the trend
  const GeneratedSeries s = generate_series(g);
  HorseraceConfig cfg;
  cfg.methods = {Method::ipfp, Method::ipfp_lag};
  const HorseraceResult r = run_horserace(s.dataset, cfg);
  double l1_ipfp = 0.0, l1_lag = 0.0;
  int n_ipfp = 0, n_lag = 0;
  for (const auto& row : r.rows) {
    if (row.status != "ok" || row.t < 1) continue;
    if (row.method == "IPFP") {
      l1_ipfp += row.metrics.l1;
      ++n_ipfp;
    } else {
      l1_lag += row.metrics.l1;
      ++n_lag;
    }
  }
  REQUIRE(n_ipfp == n_lag);
  CHECK(l1_lag / n_lag < l1_ipfp / n_ipfp);
}

TEST_CASE("plots omit metrics with no finite values") {
  const fs::path dir = temp_dir("plot_omit");
  std::vector<ReportRow> rows;
  ReportRow failed;
  failed.method = "IPFP";
  failed.t = 0;
  failed.status = "failed";
  failed.error = "synthetic failure";
  rows.push_back(failed);
  emit_plots(rows, dir);
  CHECK(!fs::exists(dir / "metric_l1.svg"));
  std::ifstream mf(dir / "plots_manifest.json");
  std::string manifest((std::istreambuf_iterator<char>(mf)), std::istreambuf_iterator<char>());
  CHECK(manifest.find("\"omitted\"") != std::string::npos);
  CHECK(manifest.find("l1") != std::string::npos);
}

TEST_CASE("per-method results are independent of the execution order") {
  const GeneratedSeries s = generate_series(small_config());
  HorseraceConfig fwd;
  fwd.methods = {Method::ipfp, Method::dc_gravity, Method::h_er};
  fwd.n_samples = 6;
  fwd.rng_seed = 77;
  HorseraceConfig rev = fwd;
  rev.methods = {Method::h_er, Method::dc_gravity, Method::ipfp};

  const HorseraceResult a = run_horserace(s.dataset, fwd);
  const HorseraceResult b = run_horserace(s.dataset, rev);
  const auto key = [](const ReportRow& r) { return r.method + "#" + std::to_string(r.t); };
  std::map<std::string, double> l1a, l1b;
  for (const auto& r : a.rows)
    if (r.status == "ok") l1a[key(r)] = r.metrics.l1;
  for (const auto& r : b.rows)
    if (r.status == "ok") l1b[key(r)] = r.metrics.l1;
  CHECK(l1a == l1b);
}

TEST_CASE("parallel execution matches sequential") {
  const GeneratedSeries s = generate_series(small_config());
  HorseraceConfig seq;
  seq.methods = {Method::ipfp, Method::gravity, Method::h_er, Method::lasso};
  seq.n_samples = 5;
  seq.rng_seed = 13;
  HorseraceConfig par = seq;
  par.jobs = 4;
  const HorseraceResult a = run_horserace(s.dataset, seq);
  const HorseraceResult b = run_horserace(s.dataset, par);
  REQUIRE(a.rows.size() == b.rows.size());
  for (size_t k = 0; k < a.rows.size(); ++k) {
    CHECK(a.rows[k].method == b.rows[k].method);
    CHECK(a.rows[k].status == b.rows[k].status);
    if (a.rows[k].status == "ok") {
      CHECK(a.rows[k].metrics.l1 == b.rows[k].metrics.l1);
      CHECK(a.rows[k].metrics.auc_roc == b.rows[k].metrics.auc_roc);
    }
  }
}

TEST_CASE("per-method failures do not abort the race") {
  // A dataset slice with a zero-total marginal makes GRAVITY throw; the
  // other methods still run.
  Matrix x = Matrix::Zero(4, 4);
  TimeSeriesDataset ds;
  ds.networks.emplace_back(x);
  HorseraceConfig cfg;
  cfg.methods = {Method::gravity, Method::mindens};
  const HorseraceResult r = run_horserace(ds, cfg);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].status == "failed");
  CHECK(!r.rows[0].error.empty());
}

TEST_CASE("fixed density source is honored") {
  const GeneratedSeries s = generate_series(small_config());
  CHECK(density_for(s.dataset, 0, DensitySource::fixed_source(0.3)).value() == 0.3);
  const double oracle = density(binarize(s.dataset.networks[0]));
  CHECK(density_for(s.dataset, 0, DensitySource::oracle_source()).value() == oracle);
}

TEST_CASE("report files and plots are written") {
  const fs::path dir = temp_dir("outputs");
  const GeneratedSeries s = generate_series(small_config());
  HorseraceConfig cfg;
  cfg.methods = {Method::ipfp, Method::gravity};
  cfg.output_dir = (dir / "race").string();
  const HorseraceResult r = run_horserace(s.dataset, cfg);
  CHECK(fs::exists(dir / "race" / "report.csv"));
  CHECK(fs::exists(dir / "race" / "aggregate.json"));

  emit_plots(r.rows, dir / "plots");
  CHECK(fs::exists(dir / "plots" / "plot_data.csv"));
  CHECK(fs::exists(dir / "plots" / "metric_l1.svg"));
  CHECK(fs::exists(dir / "plots" / "plots_manifest.json"));

  // Round trip: plot data values reproduce the report bit-exactly.
  std::ifstream in(dir / "plots" / "plot_data.csv");
  std::string line;
  std::getline(in, line);  // header
  int checked = 0;
  while (std::getline(in, line)) {
    const auto c1 = line.find(','), c2 = line.find(',', c1 + 1), c3 = line.find(',', c2 + 1);
    const std::string metric = line.substr(0, c1);
    if (metric != "l1") continue;
    const std::string method = line.substr(c1 + 1, c2 - c1 - 1);
    const int t = std::stoi(line.substr(c2 + 1, c3 - c2 - 1));
    const double v = std::stod(line.substr(c3 + 1));
    for (const auto& row : r.rows)
      if (row.method == method && row.t == t) {
        CHECK(row.metrics.l1 == v);
        ++checked;
      }
  }
  CHECK(checked == 8);
}

TEST_CASE("one-method one-metric plot shape") {
  const fs::path dir = temp_dir("plot_single");
  std::vector<ReportRow> rows;
  for (int t = 0; t < 3; ++t) {
    ReportRow r;
    r.method = "IPFP";
    r.t = t;
    r.status = "ok";
    r.metrics.l1 = 10.0 + t;
    rows.push_back(r);
  }
  emit_plots(rows, dir);
  std::ifstream svg(dir / "metric_l1.svg");
  std::string content((std::istreambuf_iterator<char>(svg)), std::istreambuf_iterator<char>());
  // exactly one polyline for the single method
  size_t count = 0, pos = 0;
  while ((pos = content.find("<polyline", pos)) != std::string::npos) {
    ++count;
    pos += 9;
  }
  CHECK(count == 1);

  std::ifstream csv(dir / "plot_data.csv");
  std::string line;
  int l1_rows = 0;
  std::getline(csv, line);
  while (std::getline(csv, line))
    if (line.rfind("l1,", 0) == 0) ++l1_rows;
  CHECK(l1_rows == 3);
}
