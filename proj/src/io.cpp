#include "netrecon/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace netrecon {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw IoError("csv: malformed number '" + std::string(s) + "'");
  return v;
}

std::ofstream open_out(const fs::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + file.string());
  return out;
}

std::ifstream open_in(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + file.string());
  return in;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_matrix_csv(const fs::path& file, const MatrixRef& m) {
  auto out = open_out(file);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(i == j ? 0.0 : m(i, j));
    }
    out << '\n';
  }
}

Matrix read_matrix_csv(const fs::path& file) {
  auto in = open_in(file);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("matrix csv is empty: " + file.string());
  const Index n = static_cast<Index>(rows.size());
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    if (static_cast<Index>(rows[i].size()) != n)
      throw IoError("matrix csv is not square: " + file.string());
    for (Index j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  m.diagonal().setZero();
  return m;
}

void write_edge_list_csv(const fs::path& file, const std::vector<WeightedNetwork>& networks) {
  auto out = open_out(file);
  out << "t,src,dst,value\n";
  for (size_t t = 0; t < networks.size(); ++t) {
    const auto& net = networks[t];
    for (Index i = 0; i < net.size(); ++i)
      for (Index j = 0; j < net.size(); ++j)
        if (i != j && net.value(i, j) != 0.0)
          out << t << ',' << i << ',' << j << ',' << format_double(net.value(i, j)) << '\n';
  }
}

std::vector<WeightedNetwork> read_edge_list_csv(const fs::path& file, Index n, Index t_count) {
  auto in = open_in(file);
  std::string line;
  if (!std::getline(in, line) || split(line, ',')[0] != "t")
    throw IoError("edge list csv: missing 't,src,dst,value' header");
  struct Entry {
    long t, i, j;
    double v;
  };
  std::vector<Entry> entries;
  long max_node = -1, max_t = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 4) throw IoError("edge list csv: expected 4 columns");
    Entry e{};
    e.t = static_cast<long>(parse_double(cells[0]));
    e.i = static_cast<long>(parse_double(cells[1]));
    e.j = static_cast<long>(parse_double(cells[2]));
    e.v = parse_double(cells[3]);
    max_node = std::max({max_node, e.i, e.j});
    max_t = std::max(max_t, e.t);
    entries.push_back(e);
  }
  if (n == 0) n = static_cast<Index>(max_node + 1);
  if (t_count == 0) t_count = static_cast<Index>(max_t + 1);
  if (n < 2 || t_count < 1) throw IoError("edge list csv: empty or degenerate");

  std::vector<Matrix> slices(t_count, Matrix::Zero(n, n));
  for (const auto& e : entries) {
    if (e.t < 0 || e.t >= t_count || e.i < 0 || e.i >= n || e.j < 0 || e.j >= n || e.i == e.j)
      throw IoError("edge list csv: entry out of range");
    slices[e.t](e.i, e.j) = e.v;
  }
  std::vector<WeightedNetwork> nets;
  nets.reserve(t_count);
  for (auto& s : slices) nets.emplace_back(std::move(s));
  return nets;
}

void write_vector_csv(const fs::path& file, const Vector& v) {
  auto out = open_out(file);
  for (Index i = 0; i < v.size(); ++i) out << format_double(v(i)) << '\n';
}

Vector read_vector_csv(const fs::path& file) {
  auto in = open_in(file);
  std::vector<double> vals;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    vals.push_back(parse_double(cells[0]));
  }
  Vector v(static_cast<Index>(vals.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = vals[i];
  return v;
}

namespace {

std::string time_file_name(size_t t) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "t%03zu.csv", t);
  return buf;
}

std::string cov_file_name(size_t t) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "cov%03zu.csv", t);
  return buf;
}

}  // namespace

void save_dataset(const fs::path& dir, const TimeSeriesDataset& ds, const Vector& gdp,
                  std::uint64_t seed, const std::string& config_json) {
  ds.validate();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory: " + dir.string());

  json manifest;
  manifest["schema_version"] = kSchemaVersion;
  manifest["kind"] = "dataset";
  manifest["n"] = ds.node_count();
  manifest["T"] = ds.time_points();
  manifest["seed"] = seed;
  if (!config_json.empty()) manifest["config"] = json::parse(config_json);

  json files = json::array();
  for (size_t t = 0; t < ds.networks.size(); ++t) {
    write_matrix_csv(dir / time_file_name(t), ds.networks[t].values());
    files.push_back(time_file_name(t));
  }
  manifest["networks"] = files;

  if (!ds.covariates.empty()) {
    json covs = json::array();
    for (size_t t = 0; t < ds.covariates.size(); ++t) {
      write_matrix_csv(dir / cov_file_name(t), ds.covariates[t].values());
      covs.push_back(cov_file_name(t));
    }
    manifest["covariates"] = covs;
  }
  if (gdp.size() > 0) {
    write_vector_csv(dir / "gdp.csv", gdp);
    manifest["gdp"] = "gdp.csv";
  }
  write_edge_list_csv(dir / "edges.csv", ds.networks);
  manifest["edgelist"] = "edges.csv";
  manifest["time_labels"] = ds.time_labels;
  if (!ds.networks.front().node_labels().empty())
    manifest["node_labels"] = ds.networks.front().node_labels();

  auto out = open_out(dir / "manifest.json");
  out << manifest.dump(2) << '\n';
}

LoadedDataset load_dataset(const fs::path& dir) {
  auto in = open_in(dir / "manifest.json");
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw IoError("manifest.json: " + std::string(e.what()));
  }
  if (manifest.value("kind", "") != "dataset")
    throw IoError("manifest.json: not a dataset manifest");

  LoadedDataset loaded;
  loaded.seed = manifest.value("seed", std::uint64_t{0});
  std::vector<std::string> node_labels;
  if (manifest.contains("node_labels"))
    node_labels = manifest["node_labels"].get<std::vector<std::string>>();
  for (const auto& f : manifest.at("networks"))
    loaded.dataset.networks.emplace_back(read_matrix_csv(dir / f.get<std::string>()),
                                         node_labels);
  if (manifest.contains("covariates"))
    for (const auto& f : manifest["covariates"])
      loaded.dataset.covariates.emplace_back(read_matrix_csv(dir / f.get<std::string>()));
  if (manifest.contains("gdp")) loaded.gdp = read_vector_csv(dir / manifest["gdp"].get<std::string>());
  if (manifest.contains("time_labels"))
    loaded.dataset.time_labels = manifest["time_labels"].get<std::vector<std::string>>();
  loaded.dataset.validate();
  return loaded;
}

void save_ipfp_result(const fs::path& json_file, const IpfpResult& r) {
  const fs::path mu_file = json_file.parent_path() / (json_file.stem().string() + "_mu.csv");
  write_matrix_csv(mu_file, r.mu);

  const auto effects_to_json = [](const Vector& v) {
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i) {
      if (std::isfinite(v(i)))
        arr.push_back(v(i));
      else
        arr.push_back(nullptr);  // removed zero-marginal row/column
    }
    return arr;
  };

  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "ipfp_result";
  doc["mu_csv"] = mu_file.filename().string();
  doc["row_effects"] = effects_to_json(r.row_effects);
  doc["col_effects"] = effects_to_json(r.col_effects);
  if (r.beta) doc["beta"] = *r.beta;
  doc["iterations"] = r.iterations;
  doc["converged"] = r.converged;
  doc["covariate_degenerate"] = r.covariate_degenerate;
  auto out = open_out(json_file);
  out << doc.dump(2) << '\n';
}

void save_ensemble(const fs::path& dir,
                   const std::vector<std::pair<BinaryStructure, WeightedNetwork>>& ensemble,
                   const EnsembleManifest& m) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory: " + dir.string());
  json files = json::array();
  for (size_t s = 0; s < ensemble.size(); ++s) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "sample%04zu.csv", s);
    write_matrix_csv(dir / buf, ensemble[s].second.values());
    files.push_back(buf);
  }
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "ensemble";
  doc["alpha"] = m.alpha;
  doc["target"] = m.target;
  doc["seed"] = m.seed;
  doc["n_samples"] = m.n_samples;
  doc["samples"] = files;
  auto out = open_out(dir / "manifest.json");
  out << doc.dump(2) << '\n';
}

namespace {

constexpr const char* kReportHeader =
    "method,t,status,auc_roc,auc_pr,brier_score,brier_rel,brier_res,brier_unc,"
    "rmse_outdeg,rmse_indeg,l1,l2,error";

}  // namespace

void write_report_csv(const fs::path& file, const std::vector<ReportRow>& rows) {
  auto out = open_out(file);
  out << kReportHeader << '\n';
  for (const auto& r : rows) {
    out << r.method << ',' << r.t << ',' << r.status << ',';
    if (r.status == "ok") {
      const auto& e = r.metrics;
      out << format_double(e.auc_roc) << ',' << format_double(e.auc_pr) << ','
          << format_double(e.brier.score) << ',' << format_double(e.brier.reliability) << ','
          << format_double(e.brier.resolution) << ',' << format_double(e.brier.uncertainty)
          << ',' << format_double(e.rmse_outdeg) << ',' << format_double(e.rmse_indeg) << ','
          << format_double(e.l1) << ',' << format_double(e.l2) << ',';
    } else {
      out << ",,,,,,,,,,";
    }
    // Commas in error messages would break the column count.
    std::string err = r.error;
    for (auto& ch : err)
      if (ch == ',' || ch == '\n') ch = ';';
    out << err << '\n';
  }
}

std::vector<ReportRow> read_report_csv(const fs::path& file) {
  auto in = open_in(file);
  std::string line;
  if (!std::getline(in, line) || split(line, ',')[0] != "method")
    throw IoError("report csv: bad header");
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split(line, ',');
    if (c.size() != 14) throw IoError("report csv: expected 14 columns");
    ReportRow r;
    r.method = c[0];
    r.t = static_cast<int>(parse_double(c[1]));
    r.status = c[2];
    if (r.status == "ok") {
      r.metrics.auc_roc = parse_double(c[3]);
      r.metrics.auc_pr = parse_double(c[4]);
      r.metrics.brier.score = parse_double(c[5]);
      r.metrics.brier.reliability = parse_double(c[6]);
      r.metrics.brier.resolution = parse_double(c[7]);
      r.metrics.brier.uncertainty = parse_double(c[8]);
      r.metrics.rmse_outdeg = parse_double(c[9]);
      r.metrics.rmse_indeg = parse_double(c[10]);
      r.metrics.l1 = parse_double(c[11]);
      r.metrics.l2 = parse_double(c[12]);
    }
    r.error = c[13];
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_lasso_path_csv(const fs::path& file, const std::vector<double>& grid,
                          const std::vector<Matrix>& path) {
  if (grid.size() != path.size()) throw InvalidArgument("lasso path: grid/path length mismatch");
  auto out = open_out(file);
  out << "tau,src,dst,mu\n";
  for (size_t k = 0; k < grid.size(); ++k) {
    const Matrix& m = path[k];
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j)
        if (i != j && m(i, j) != 0.0)
          out << format_double(grid[k]) << ',' << i << ',' << j << ','
              << format_double(m(i, j)) << '\n';
  }
}

}  // namespace netrecon
