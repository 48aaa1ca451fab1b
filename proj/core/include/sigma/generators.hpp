#pragma once

// Builders for the concrete process families: Brownian motion, Brownian
// motion stopped at a level or at a moving line, exponential martingales,
// Bessel(3) and its scale-transformed local martingales.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sigma/grid_paths.hpp"
#include "sigma/random_sources.hpp"

namespace sigma {

enum class Family {
  brownian,
  brownian_stopped_level,
  brownian_drift_stopped_line,
  exp_martingale,
  bessel3,
  scale_martingale,
};

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

/// Family plus named real parameters:
///   a  level for brownian_stopped_level, optional level stop for exp_martingale
///   b  drift for brownian_drift_stopped_line, optional line stop for exp_martingale
///   x0 start for bessel3 and scale_martingale
///   normalized  scale_martingale mode (1: x0/R, 0: 1/R; default 1)
struct GeneratorSpec {
  Family family = Family::brownian;
  std::map<std::string, double> parameters;
  TimeGrid grid{1.0, 1};

  double param(const std::string& name) const;
  double param_or(const std::string& name, double fallback) const;
  bool has(const std::string& name) const { return parameters.count(name) != 0; }

  /// Throws std::invalid_argument when a parameter is missing or out of
  /// its domain (a > 0, b > 0, x0 > 0).
  void validate() const;
};

/// Flat `key = value` lines: family, horizon, n_steps, then parameters.
std::string to_kv(const GeneratorSpec& spec);
GeneratorSpec spec_from_kv(const std::map<std::string, std::string>& kv);

/// First-passage rule for a Brownian path: B >= a (level) or
/// B + b t >= 1 (line).
struct HittingRule {
  enum class Kind { level, line, band };
  Kind kind = Kind::level;
  double parameter = 1.0;
  double lower = 0.0;  // band only: exit of (lower, parameter)

  static HittingRule level(double a) { return {Kind::level, a}; }
  static HittingRule line(double b) { return {Kind::line, b}; }
  static HittingRule band(double lo, double hi) { return {Kind::band, hi, lo}; }

  bool hit(double t, double value) const {
    switch (kind) {
      case Kind::level: return value >= parameter;
      case Kind::line: return value + parameter * t >= 1.0;
      case Kind::band: return value >= parameter || value <= lower;
    }
    return false;
  }
  std::string describe() const;
};

Path brownian_from_increments(const TimeGrid& grid, std::span<const double> increments,
                              std::string label = "B");
/// B_0 = 0 and increments from gaussian_increments(grid, key).
Path gen_brownian(const TimeGrid& grid, const StreamKey& key);

StoppedPath gen_stopped_hitting(const Path& base, const HittingRule& rule);

/// Same result as gen_stopped_hitting(gen_brownian(grid, key), rule) but
/// stops drawing at the hit.
StoppedPath gen_brownian_until(const TimeGrid& grid, const StreamKey& key, const HittingRule& rule);

/// M_t = exp(B_{t^T} - (t^T)/2) on the given Brownian path, T the grid
/// stopping index of `stop` if any.
Path exp_martingale_from_brownian(const Path& brownian, const std::optional<HittingRule>& stop);
Path gen_exp_martingale(const TimeGrid& grid, const StreamKey& key,
                        const std::optional<HittingRule>& stop = std::nullopt);

/// |W| for a 3-d Brownian motion W started at (x0, 0, 0) with the given
/// coordinate increments.
Path bessel3_from_increments(const TimeGrid& grid, double x0, std::span<const double> dx,
                             std::span<const double> dy, std::span<const double> dz);
/// Coordinates use substreams key.substream + {0, 1, 2}.
Path gen_bessel3(const TimeGrid& grid, double x0, const StreamKey& key);

enum class ScaleMode { neg_inverse, normalized };

/// Scale s(x) = -1/x: neg_inverse gives -s(R) = 1/R, normalized gives
/// s(R)/s(x0) = x0/R. Throws std::domain_error on R <= 0.
Path scale_martingale(const Path& bessel, ScaleMode mode);

/// The process a spec describes, driven by `key`.
Path generate(const GeneratorSpec& spec, const StreamKey& key);

struct Ensemble {
  GeneratorSpec spec;
  std::vector<Path> paths;
  std::vector<StreamKey> seeds;
};

/// Path i uses StreamKey{master_seed, i, 0}.
Ensemble make_ensemble(const GeneratorSpec& spec, std::uint64_t master_seed, std::size_t n_paths,
                       unsigned workers = 0);

}  // namespace sigma
