#pragma once

// Time grids, sampled paths, stopped paths and Monte Carlo estimates.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sigma {

/// Uniform time axis 0 = t_0 < t_1 < ... < t_n = horizon.
class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t n_steps);

  double horizon() const { return horizon_; }
  std::size_t n_steps() const { return n_steps_; }
  std::size_t size() const { return n_steps_ + 1; }
  double dt() const { return dt_; }

  /// t_i; the last point is the horizon exactly.
  double time(std::size_t i) const {
    return i == n_steps_ ? horizon_ : static_cast<double>(i) * dt_;
  }
  std::vector<double> times() const;

  /// Index of the last grid point not after t (clamped to [0, n]).
  std::size_t index_at(double t) const;

  /// Grid with every `factor`-th point of this one.
  TimeGrid coarsened(std::size_t factor) const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double horizon_;
  std::size_t n_steps_;
  double dt_;
};

TimeGrid make_grid(double horizon, std::size_t n_steps);

/// A process sampled at the points of a TimeGrid. Values are finite.
class Path {
 public:
  Path(TimeGrid grid, std::vector<double> values, std::string label = {});

  /// Constant path.
  static Path constant(const TimeGrid& grid, double value, std::string label = {});

  const TimeGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }
  const std::string& label() const { return label_; }

  /// Every `factor`-th value, on the coarsened grid.
  Path subsampled(std::size_t factor) const;
  /// The prefix up to and including index `last`, on the matching shorter grid.
  Path truncated(std::size_t last) const;

 private:
  TimeGrid grid_;
  std::vector<double> values_;
  std::string label_;
};

/// Throws std::invalid_argument when the grids differ.
void require_same_grid(const Path& a, const Path& b, const char* what);

/// A path frozen after its first-passage index.
struct StoppedPath {
  Path path;
  std::optional<std::size_t> stop_index;  // nullopt: not stopped
  std::string rule;

  bool stopped() const { return stop_index.has_value(); }
};

using IndexPredicate = std::function<bool(std::size_t index, double value)>;

/// Stops at the first index where the predicate holds; values are frozen
/// at the stopped value from there on.
StoppedPath stop_path(const Path& path, const IndexPredicate& predicate, std::string rule);

/// Monte Carlo mean with its standard error.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

/// sqrt(a.se^2 + b.se^2), the standard error of a difference of
/// independent estimates.
double combined_std_error(const McEstimate& a, const McEstimate& b);

/// Sample mean and sd/sqrt(n). Summation is pairwise over a fixed tree so
/// the result depends only on the order of `samples`. Requires n >= 2.
McEstimate estimate(std::span<const double> samples);

/// Pairwise sum with a fixed reduction shape.
double pairwise_sum(std::span<const double> values);

double median(std::vector<double> values);

/// Long-form CSV: header `path_id,t,value`, one row per grid point, 17
/// significant digits, LF endings.
void write_paths_csv(std::ostream& out, std::span<const Path> paths);
std::vector<Path> read_paths_csv(std::istream& in);

}  // namespace sigma
