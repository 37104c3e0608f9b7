// Command-line frontend: generate synthetic datasets, run single-method
// reconstructions, evaluate them against the truth, drive the full
// method comparison and emit plot data.
//
// Exit codes: 0 success, 2 invalid config, 3 method failure, 4 I/O error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "netrecon/core.hpp"
#include "netrecon/generator.hpp"
#include "netrecon/horserace.hpp"
#include "netrecon/io.hpp"
#include "netrecon/lasso.hpp"
#include "netrecon/metrics.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace netrecon;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitMethod = 3;
constexpr int kExitIo = 4;

DensitySource parse_density(const std::string& text) {
  if (text == "oracle") return DensitySource::oracle_source();
  try {
    return DensitySource::fixed_source(std::stod(text));
  } catch (const std::exception&) {
    throw InvalidArgument("density must be 'oracle' or a number in (0,1]");
  }
}

std::string config_echo(const GeneratorConfig& cfg) {
  json j;
  j["n"] = cfg.n;
  j["T"] = cfg.T;
  j["target_density"] = cfg.target_density;
  j["weight_tail"] = cfg.weight_tail;
  j["trend"] = cfg.trend;
  j["persistence"] = cfg.persistence;
  j["fitness_sigma"] = cfg.fitness_sigma;
  j["rng_seed"] = cfg.rng_seed;
  return j.dump();
}

int cmd_generate(const std::string& preset, const GeneratorConfig& flags, bool have_preset,
                 const std::string& output) {
  GeneratorConfig cfg = have_preset ? generator_preset(preset) : flags;
  if (have_preset) cfg.rng_seed = flags.rng_seed;
  const GeneratedSeries series = generate_series(cfg);
  save_dataset(output, series.dataset, series.gdp, cfg.rng_seed, config_echo(cfg));
  std::cout << "dataset written to " << output << " (n=" << cfg.n << ", T=" << cfg.T << ")\n";
  return kExitOk;
}

int cmd_reconstruct(const std::string& method_name_text, const std::string& input,
                    const std::string& density_text, const std::string& output,
                    int n_samples, std::uint64_t seed, bool emit_ensembles,
                    bool emit_lasso_path) {
  const Method method = parse_method(method_name_text);
  const LoadedDataset loaded = load_dataset(input);
  HorseraceConfig cfg;
  cfg.n_samples = n_samples;
  cfg.rng_seed = seed;
  cfg.density_source = parse_density(density_text);

  fs::create_directories(output);
  json manifest;
  manifest["schema_version"] = kSchemaVersion;
  manifest["kind"] = "reconstruction";
  manifest["method"] = method_name(method);
  manifest["seed"] = seed;
  manifest["n_samples"] = n_samples;
  manifest["density"] = density_text;
  json mu_files = json::array();
  json prob_files = json::array();

  const int T = static_cast<int>(loaded.dataset.time_points());
  for (int t = 0; t < T; ++t) {
    char mu_name[32], p_name[32];
    std::snprintf(mu_name, sizeof(mu_name), "mu_t%03d.csv", t);
    std::snprintf(p_name, sizeof(p_name), "probs_t%03d.csv", t);
    if (method_needs_lag(method) && t < 1) {
      mu_files.push_back(nullptr);
      prob_files.push_back(nullptr);
      continue;
    }
    const DensityTarget target = density_for(loaded.dataset, t, cfg.density_source);
    const ReconstructionResult rec = reconstruct_method(method, loaded.dataset, t, target, cfg);
    write_matrix_csv(fs::path(output) / mu_name, rec.mu);
    mu_files.push_back(mu_name);
    if (rec.probabilities) {
      write_matrix_csv(fs::path(output) / p_name, rec.probabilities->values());
      prob_files.push_back(p_name);
    } else {
      prob_files.push_back(nullptr);
    }
    if (emit_ensembles && !rec.ensemble.empty()) {
      char ens_name[32];
      std::snprintf(ens_name, sizeof(ens_name), "ensemble_t%03d", t);
      EnsembleManifest em;
      em.alpha = rec.calibrated_alpha.value_or(0.0);
      em.target = target.value();
      em.seed = seed;
      em.n_samples = static_cast<int>(rec.ensemble.size());
      save_ensemble(fs::path(output) / ens_name, rec.ensemble, em);
    }
    if (emit_lasso_path && method == Method::lasso) {
      char path_name[32];
      std::snprintf(path_name, sizeof(path_name), "path_t%03d.csv", t);
      const MarginalVector m = compute_marginals(loaded.dataset.networks[t]);
      const auto grid = lasso_default_grid(m, cfg.lasso_grid_points);
      write_lasso_path_csv(fs::path(output) / path_name, grid, lasso_path(m, grid));
    }
  }
  manifest["mu"] = mu_files;
  manifest["probabilities"] = prob_files;
  std::ofstream mf(fs::path(output) / "manifest.json", std::ios::binary);
  if (!mf) throw IoError("cannot write reconstruction manifest");
  mf << manifest.dump(2) << '\n';
  std::cout << "reconstruction written to " << output << "\n";
  return kExitOk;
}

int cmd_evaluate(const std::string& reconstruction, const std::string& truth,
                 const std::string& density_text, const std::string& output) {
  const LoadedDataset loaded = load_dataset(truth);
  std::ifstream mf(fs::path(reconstruction) / "manifest.json");
  if (!mf) throw IoError("cannot read reconstruction manifest");
  json manifest;
  mf >> manifest;
  if (manifest.value("kind", "") != "reconstruction")
    throw IoError("not a reconstruction directory");
  const std::string method = manifest.value("method", "?");
  const DensitySource source = parse_density(density_text);

  std::vector<ReportRow> rows;
  const auto& mu_files = manifest.at("mu");
  for (int t = 0; t < static_cast<int>(mu_files.size()); ++t) {
    ReportRow row;
    row.method = method;
    row.t = t;
    if (mu_files[t].is_null()) {
      row.status = "skipped";
      row.error = "not reconstructed";
      rows.push_back(row);
      continue;
    }
    try {
      ReconstructionResult rec;
      rec.mu = read_matrix_csv(fs::path(reconstruction) / mu_files[t].get<std::string>());
      const auto& prob_files = manifest.at("probabilities");
      if (!prob_files[t].is_null())
        rec.probabilities = EdgeProbabilityMatrix(
            read_matrix_csv(fs::path(reconstruction) / prob_files[t].get<std::string>()));
      const DensityTarget target = density_for(loaded.dataset, t, source);
      row.metrics = evaluate(rec, loaded.dataset.networks[t], target);
      row.status = "ok";
    } catch (const Error& e) {
      row.status = "failed";
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  write_report_csv(output, rows);
  std::cout << "report written to " << output << "\n";
  return kExitOk;
}

int cmd_horserace(const std::string& config_file) {
  std::ifstream in(config_file);
  if (!in) throw IoError("cannot read config: " + config_file);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidArgument("config: " + std::string(e.what()));
  }

  HorseraceConfig cfg;
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& name : j["methods"]) cfg.methods.push_back(parse_method(name));
  }
  const auto density = j.value("density", json("oracle"));
  cfg.density_source = density.is_string() ? parse_density(density.get<std::string>())
                                           : DensitySource::fixed_source(density.get<double>());
  cfg.output_dir = j.value("output_dir", std::string("horserace_out"));
  cfg.rng_seed = j.value("seed", std::uint64_t{0});
  cfg.n_samples = j.value("n_samples", cfg.n_samples);
  cfg.lasso_grid_points = j.value("lasso_grid_points", cfg.lasso_grid_points);
  cfg.jobs = j.value("jobs", cfg.jobs);
  cfg.mindens.restarts = j.value("mindens_restarts", cfg.mindens.restarts);
  cfg.mindens.max_steps = j.value("mindens_max_steps", cfg.mindens.max_steps);
  cfg.tomogravity.psi = j.value("tomogravity_psi", cfg.tomogravity.psi);

  const LoadedDataset loaded = load_dataset(j.at("dataset").get<std::string>());
  const HorseraceResult result = run_horserace(loaded.dataset, cfg);

  int failures = 0;
  for (const auto& row : result.rows)
    if (row.status == "failed") ++failures;
  std::cout << "horserace finished: " << result.rows.size() << " cells, " << failures
            << " failures; report in " << cfg.output_dir << "\n";
  return kExitOk;
}

int cmd_plot(const std::string& report, const std::string& output) {
  const std::vector<ReportRow> rows = read_report_csv(report);
  emit_plots(rows, output);
  std::cout << "plots written to " << output << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted directed network reconstruction from marginals"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a synthetic dataset directory");
  std::string gen_preset, gen_output = "dataset";
  GeneratorConfig gen_cfg;
  gen->add_option("--preset", gen_preset, "reduced | full | uniform-degree");
  gen->add_option("--n", gen_cfg.n, "node count");
  gen->add_option("--T", gen_cfg.T, "time points");
  gen->add_option("--density", gen_cfg.target_density, "target density in (0,1]");
  gen->add_option("--weight-tail", gen_cfg.weight_tail, "Pareto shape for edge values");
  gen->add_option("--trend", gen_cfg.trend, "per-period volume growth");
  gen->add_option("--persistence", gen_cfg.persistence, "edge survival probability");
  gen->add_option("--fitness-sigma", gen_cfg.fitness_sigma, "log-normal fitness spread");
  gen->add_option("--seed", gen_cfg.rng_seed, "rng seed");
  gen->add_option("--output", gen_output, "output directory")->required();

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "Run a single method over a dataset");
  std::string rec_method, rec_input, rec_density = "oracle", rec_output = "reconstruction";
  int rec_samples = 50;
  std::uint64_t rec_seed = 0;
  bool rec_ensembles = false, rec_path = false;
  rec->add_option("--method", rec_method, "method name, e.g. IPFP or DC-GRAVITY")->required();
  rec->add_option("--input", rec_input, "dataset directory")->required();
  rec->add_option("--density", rec_density, "oracle | fixed value");
  rec->add_option("--output", rec_output, "output directory");
  rec->add_option("--samples", rec_samples, "ensemble size for sampling methods");
  rec->add_option("--seed", rec_seed, "rng seed");
  rec->add_flag("--emit-ensembles", rec_ensembles, "write one matrix CSV per ensemble sample");
  rec->add_flag("--emit-path", rec_path, "write the LASSO coefficient path (LASSO only)");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Evaluate a reconstruction against the truth");
  std::string ev_rec, ev_truth, ev_density = "oracle", ev_output = "report.csv";
  ev->add_option("--reconstruction", ev_rec, "reconstruction directory")->required();
  ev->add_option("--truth", ev_truth, "truth dataset directory")->required();
  ev->add_option("--density", ev_density, "oracle | fixed value");
  ev->add_option("--output", ev_output, "report csv path");

  // horserace
  auto* hr = app.add_subcommand("horserace", "Run the full method battery from a JSON config");
  std::string hr_config;
  hr->add_option("--config", hr_config, "JSON config file")->required();

  // plot
  auto* pl = app.add_subcommand("plot", "Emit plot CSV + SVG charts from a report");
  std::string pl_report, pl_output = "plots";
  pl->add_option("--report", pl_report, "report csv")->required();
  pl->add_option("--output", pl_output, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_preset, gen_cfg, !gen_preset.empty(), gen_output);
    if (rec->parsed())
      return cmd_reconstruct(rec_method, rec_input, rec_density, rec_output, rec_samples,
                             rec_seed, rec_ensembles, rec_path);
    if (ev->parsed()) return cmd_evaluate(ev_rec, ev_truth, ev_density, ev_output);
    if (hr->parsed()) return cmd_horserace(hr_config);
    if (pl->parsed()) return cmd_plot(pl_report, pl_output);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidMarginals& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "method failure: " << e.what() << "\n";
    return kExitMethod;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitConfig;
}
