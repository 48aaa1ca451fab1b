#include "sigma/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sigma {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

nlohmann::json to_json_value(const McEstimate& e) {
  return {{"mean", e.mean}, {"stderr", e.std_error}, {"n", e.n_samples}};
}

std::string to_json(const ExperimentReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["experiment"] = r.name;
  j["spec"] = r.spec;
  j["seed"] = r.seed;
  j["n_paths"] = r.n_paths;
  j["horizon"] = r.horizon;
  j["censoring_rate"] = r.censoring_rate;
  j["accepted"] = r.accepted;
  j["summary"] = r.summary;
  j["results"] = r.results;
  j["warnings"] = r.warnings;
  j["notes"] = r.notes;
  return j.dump(2) + "\n";
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += num(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string to_svg(const Chart& chart) {
  constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : chart.series) {
    for (double v : s.x) { x0 = std::min(x0, v); x1 = std::max(x1, v); }
    for (double v : s.y) { y0 = std::min(y0, v); y1 = std::max(y1, v); }
  }
  if (!std::isfinite(x0)) { x0 = 0; x1 = 1; y0 = 0; y1 = 1; }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * (kW - kLeft - kRight); };
  auto py = [&](double y) { return kH - kBottom - (y - y0) / (y1 - y0) * (kH - kTop - kBottom); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << escape_xml(chart.title) << "</text>\n";
  o << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\"" << kW - kRight
    << "\" y2=\"" << kH - kBottom << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
    << kH - kBottom << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0;
    const double yv = y0 + (y1 - y0) * k / 4.0;
    o << "<text x=\"" << px(xv) << "\" y=\"" << kH - kBottom + 16
      << "\" text-anchor=\"middle\">" << short_num(xv) << "</text>\n";
    o << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
      << short_num(yv) << "</text>\n";
  }
  o << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 10 << "\" text-anchor=\"middle\">"
    << escape_xml(chart.x_label) << "</text>\n";
  o << "<text x=\"16\" y=\"" << kH / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << kH / 2 << ")\">" << escape_xml(chart.y_label) << "</text>\n";
  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    const Series& series = chart.series[s];
    const char* color = kColors[s % std::size(kColors)];
    const std::size_t n = std::min(series.x.size(), series.y.size());
    if (series.markers) {
      for (std::size_t i = 0; i < n; ++i) {
        o << "<circle cx=\"" << px(series.x[i]) << "\" cy=\"" << py(series.y[i])
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    } else {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < n; ++i) {
        o << (i ? " " : "") << px(series.x[i]) << ',' << py(series.y[i]);
      }
      o << "\"/>\n";
    }
    o << "<text x=\"" << kW - kRight - 150 << "\" y=\"" << kTop + 16 * s << "\" fill=\"" << color
      << "\">" << escape_xml(series.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::vector<std::filesystem::path> write_report(const ExperimentReport& report,
                                                const std::filesystem::path& dir,
                                                const std::vector<Format>& formats) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto wants = [&](Format f) { return std::find(formats.begin(), formats.end(), f) != formats.end(); };
  if (wants(Format::json)) {
    written.push_back(dir / (report.name + ".json"));
    write_file(written.back(), to_json(report));
  }
  if (wants(Format::csv)) {
    for (const Table& t : report.tables) {
      written.push_back(dir / (report.name + "_" + t.name + ".csv"));
      write_file(written.back(), to_csv(t));
    }
  }
  if (wants(Format::svg) && report.chart) {
    written.push_back(dir / (report.name + ".svg"));
    write_file(written.back(), to_svg(*report.chart));
  }
  return written;
}

}  // namespace sigma
