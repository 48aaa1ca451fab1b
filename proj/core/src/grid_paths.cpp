#include "sigma/grid_paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sigma {

TimeGrid::TimeGrid(double horizon, std::size_t n_steps)
    : horizon_(horizon), n_steps_(n_steps), dt_(0.0) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("TimeGrid: horizon must be positive and finite");
  }
  if (n_steps == 0) {
    throw std::invalid_argument("TimeGrid: n_steps must be at least 1");
  }
  dt_ = horizon_ / static_cast<double>(n_steps_);
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = time(i);
  return out;
}

std::size_t TimeGrid::index_at(double t) const {
  if (t <= 0.0) return 0;
  if (t >= horizon_) return n_steps_;
  // Guard against t/dt landing a hair below an exact grid point.
  const double k = std::floor(t / dt_ + 1e-9);
  return std::min(static_cast<std::size_t>(k), n_steps_);
}

TimeGrid TimeGrid::coarsened(std::size_t factor) const {
  if (factor == 0 || n_steps_ % factor != 0) {
    throw std::invalid_argument("TimeGrid::coarsened: factor must divide n_steps");
  }
  return TimeGrid(horizon_, n_steps_ / factor);
}

TimeGrid make_grid(double horizon, std::size_t n_steps) { return TimeGrid(horizon, n_steps); }

Path::Path(TimeGrid grid, std::vector<double> values, std::string label)
    : grid_(grid), values_(std::move(values)), label_(std::move(label)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("Path: expected " + std::to_string(grid_.size()) +
                                " values, got " + std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::invalid_argument("Path '" + label_ + "': non-finite value at index " +
                                  std::to_string(i));
    }
  }
}

Path Path::constant(const TimeGrid& grid, double value, std::string label) {
  return Path(grid, std::vector<double>(grid.size(), value), std::move(label));
}

Path Path::subsampled(std::size_t factor) const {
  const TimeGrid coarse = grid_.coarsened(factor);
  std::vector<double> v(coarse.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i * factor];
  return Path(coarse, std::move(v), label_);
}

Path Path::truncated(std::size_t last) const {
  if (last == 0 || last > grid_.n_steps()) {
    throw std::invalid_argument("Path::truncated: index out of range");
  }
  const TimeGrid g(grid_.time(last), last);
  return Path(g, std::vector<double>(values_.begin(), values_.begin() + last + 1), label_);
}

void require_same_grid(const Path& a, const Path& b, const char* what) {
  if (!(a.grid() == b.grid())) {
    throw std::invalid_argument(std::string(what) + ": paths live on different grids");
  }
}

StoppedPath stop_path(const Path& path, const IndexPredicate& predicate, std::string rule) {
  const auto v = path.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (predicate(i, v[i])) {
      std::vector<double> frozen(v.begin(), v.end());
      std::fill(frozen.begin() + static_cast<std::ptrdiff_t>(i), frozen.end(), v[i]);
      return {Path(path.grid(), std::move(frozen), path.label()), i, std::move(rule)};
    }
  }
  return {path, std::nullopt, std::move(rule)};
}

double combined_std_error(const McEstimate& a, const McEstimate& b) {
  return std::hypot(a.std_error, b.std_error);
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 64;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double x : values) s += x;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

McEstimate estimate(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("estimate: need at least 2 samples");
  const double mean = pairwise_sum(samples) / static_cast<double>(n);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = samples[i] - mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

namespace {

void put_number(std::ostream& out, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out << buf;
}

}  // namespace

void write_paths_csv(std::ostream& out, std::span<const Path> paths) {
  out << "path_id,t,value\n";
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const Path& path = paths[p];
    for (std::size_t i = 0; i < path.size(); ++i) {
      out << p << ',';
      put_number(out, path.grid().time(i));
      out << ',';
      put_number(out, path[i]);
      out << '\n';
    }
  }
}

std::vector<Path> read_paths_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "path_id,t,value") {
    throw std::invalid_argument("read_paths_csv: missing header 'path_id,t,value'");
  }
  std::map<long, std::pair<std::vector<double>, std::vector<double>>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string id, t, v;
    if (!std::getline(ss, id, ',') || !std::getline(ss, t, ',') || !std::getline(ss, v)) {
      throw std::invalid_argument("read_paths_csv: malformed line " + std::to_string(line_no));
    }
    auto& [ts, vs] = rows[std::stol(id)];
    ts.push_back(std::stod(t));
    vs.push_back(std::stod(v));
  }
  std::vector<Path> out;
  for (auto& [id, tv] : rows) {
    auto& [ts, vs] = tv;
    if (ts.size() < 2 || ts.front() != 0.0) {
      throw std::invalid_argument("read_paths_csv: path " + std::to_string(id) +
                                  " does not start at t = 0");
    }
    TimeGrid grid(ts.back(), ts.size() - 1);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (std::abs(ts[i] - grid.time(i)) > 1e-9 * grid.horizon()) {
        throw std::invalid_argument("read_paths_csv: non-uniform grid in path " +
                                    std::to_string(id));
      }
    }
    out.emplace_back(grid, std::move(vs), "path " + std::to_string(id));
  }
  return out;
}

}  // namespace sigma
