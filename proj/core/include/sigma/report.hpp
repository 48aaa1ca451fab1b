#pragma once

// Experiment reports: JSON document, CSV tables and a minimal SVG chart.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sigma/grid_paths.hpp"

namespace sigma {

inline constexpr int kReportSchema = 1;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  // scatter points instead of a polyline
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

struct ExperimentReport {
  std::string name;
  nlohmann::ordered_json spec;
  std::uint64_t seed = 0;
  std::size_t n_paths = 0;
  double horizon = 0.0;
  double censoring_rate = 0.0;
  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
  /// The experiment's own acceptance verdict.
  bool accepted = true;
  std::string summary;
  std::vector<Table> tables;
  std::optional<Chart> chart;
};

nlohmann::json to_json_value(const McEstimate& e);

/// Deterministic JSON text: no timestamps, fixed key order.
std::string to_json(const ExperimentReport& report);
std::string to_csv(const Table& table);
std::string to_svg(const Chart& chart);

enum class Format { csv, json, svg };

/// Writes <name>.json, <name>_<table>.csv and <name>.svg as requested.
/// Throws std::filesystem::filesystem_error / std::runtime_error when the
/// directory is not writable.
std::vector<std::filesystem::path> write_report(const ExperimentReport& report,
                                                const std::filesystem::path& dir,
                                                const std::vector<Format>& formats);

}  // namespace sigma
