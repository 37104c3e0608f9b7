#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "netrecon/horserace.hpp"

namespace netrecon {

namespace {

namespace fs = std::filesystem;

struct MetricColumn {
  const char* name;
  double (*get)(const EvaluationReport&);
};

const MetricColumn kMetrics[] = {
    {"auc_roc", [](const EvaluationReport& e) { return e.auc_roc; }},
    {"auc_pr", [](const EvaluationReport& e) { return e.auc_pr; }},
    {"brier_score", [](const EvaluationReport& e) { return e.brier.score; }},
    {"brier_rel", [](const EvaluationReport& e) { return e.brier.reliability; }},
    {"brier_res", [](const EvaluationReport& e) { return e.brier.resolution; }},
    {"brier_unc", [](const EvaluationReport& e) { return e.brier.uncertainty; }},
    {"rmse_outdeg", [](const EvaluationReport& e) { return e.rmse_outdeg; }},
    {"rmse_indeg", [](const EvaluationReport& e) { return e.rmse_indeg; }},
    {"l1", [](const EvaluationReport& e) { return e.l1; }},
    {"l2", [](const EvaluationReport& e) { return e.l2; }},
};

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                          "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#444444", "#a0522d"};

std::string svg_chart(const std::string& metric,
                      const std::map<std::string, std::map<int, double>>& series) {
  const double width = 680, height = 420;
  const double left = 60, right = 170, top = 30, bottom = 50;
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& [name, pts] : series)
    for (const auto& [t, v] : pts) {
      xmin = std::min(xmin, double(t));
      xmax = std::max(xmax, double(t));
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + (ymin == 0 ? 1 : std::abs(ymin) * 0.1);
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const auto sx = [&](double t) { return left + (t - xmin) / (xmax - xmin) * plot_w; };
  const auto sy = [&](double v) { return top + (1.0 - (v - ymin) / (ymax - ymin)) * plot_h; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(int(width)) +
         "\" height=\"" + std::to_string(int(height)) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string(int(left)) + "\" y=\"20\" font-family=\"sans-serif\" "
         "font-size=\"14\">" + metric + "</text>\n";
  // axes
  svg += "<line x1=\"" + format_double(left) + "\" y1=\"" + format_double(top + plot_h) +
         "\" x2=\"" + format_double(left + plot_w) + "\" y2=\"" + format_double(top + plot_h) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + format_double(left) + "\" y1=\"" + format_double(top) + "\" x2=\"" +
         format_double(left) + "\" y2=\"" + format_double(top + plot_h) +
         "\" stroke=\"black\"/>\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", ymin + ypad);
  svg += "<text x=\"4\" y=\"" + format_double(top + plot_h) +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + buf + "</text>\n";
  std::snprintf(buf, sizeof(buf), "%.4g", ymax - ypad);
  svg += "<text x=\"4\" y=\"" + format_double(top + 10) +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + buf + "</text>\n";
  svg += "<text x=\"" + format_double(left + plot_w / 2) + "\" y=\"" +
         format_double(height - 12) + "\" font-family=\"sans-serif\" font-size=\"12\">t</text>\n";

  size_t color = 0;
  for (const auto& [name, pts] : series) {
    std::string poly;
    for (const auto& [t, v] : pts) {
      poly += format_double(sx(double(t))) + "," + format_double(sy(v)) + " ";
    }
    const char* col = kPalette[color % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(col) + "\" stroke-width=\"1.5\" points=\"" +
           poly + "\"/>\n";
    const double ly = top + 16.0 * static_cast<double>(color);
    svg += "<line x1=\"" + format_double(left + plot_w + 10) + "\" y1=\"" + format_double(ly) +
           "\" x2=\"" + format_double(left + plot_w + 30) + "\" y2=\"" + format_double(ly) +
           "\" stroke=\"" + col + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + format_double(left + plot_w + 35) + "\" y=\"" + format_double(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + name + "</text>\n";
    ++color;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace

void emit_plots(const std::vector<ReportRow>& rows, const fs::path& dir) {
  if (rows.empty()) throw InvalidArgument("emit_plots: no report rows");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory: " + dir.string());

  std::ofstream csv(dir / "plot_data.csv", std::ios::binary);
  if (!csv) throw IoError("cannot open plot_data.csv for writing");
  csv << "metric,method,t,value\n";

  nlohmann::json emitted = nlohmann::json::array();
  nlohmann::json omitted = nlohmann::json::array();
  for (const auto& metric : kMetrics) {
    std::map<std::string, std::map<int, double>> series;
    for (const auto& row : rows) {
      if (row.status != "ok") continue;
      const double v = metric.get(row.metrics);
      if (!std::isfinite(v)) continue;
      series[row.method][row.t] = v;
      csv << metric.name << ',' << row.method << ',' << row.t << ',' << format_double(v)
          << '\n';
    }
    if (series.empty()) {
      omitted.push_back(metric.name);
      continue;
    }
    const std::string file = std::string("metric_") + metric.name + ".svg";
    std::ofstream svg(dir / file, std::ios::binary);
    if (!svg) throw IoError("cannot open svg for writing");
    svg << svg_chart(metric.name, series);
    emitted.push_back(file);
  }

  nlohmann::json manifest;
  manifest["schema_version"] = kSchemaVersion;
  manifest["kind"] = "plots";
  manifest["data"] = "plot_data.csv";
  manifest["emitted"] = emitted;
  manifest["omitted"] = omitted;
  std::ofstream mf(dir / "plots_manifest.json", std::ios::binary);
  if (!mf) throw IoError("cannot open plots_manifest.json for writing");
  mf << manifest.dump(2) << '\n';
}

}  // namespace netrecon
