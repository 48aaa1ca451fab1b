#pragma once

// Discrete stochastic calculus on grid paths. Integrals are left-point
// grid sums; sgn(0) = -1 throughout.

#include "sigma/grid_paths.hpp"
#include "sigma/sigma_triple.hpp"

namespace sigma {

enum class Extremum { min, max };

/// Prefix minimum (I) or prefix maximum (running sup).
Path running_extremum(const Path& path, Extremum mode);

/// S_0 = 0, S_{j+1} = S_j + h_j (x_{j+1} - x_j).
Path ito_integral(const Path& integrand, const Path& integrator);

/// Cumulative sum of squared increments.
Path quadratic_variation(const Path& x);

/// Skorokhod reflection of z (z_0 = 0 required): k_j = max(0, max_{i<=j} -z_i),
/// y = z + k >= 0, and k grows only where y = 0.
struct ReflectionPair {
  Path regulated;  // y
  Path regulator;  // k
};
ReflectionPair skorokhod_map(const Path& z);

/// Local time at 0 from Tanaka's formula,
///   L_j = |K_j| - |K_0| - sum_{i<j} sgn(K_i)(K_{i+1} - K_i),
/// with the raw residual kept next to its running-max clamp.
struct TanakaLocalTime {
  Path clamped;
  Path raw;
};
TanakaLocalTime local_time_tanaka_detailed(const Path& k);
Path local_time_tanaka(const Path& k);

/// Occupation-density estimate (1/2eps) sum_{i<j} 1{|K_i| < eps} dt.
Path local_time_occupation(const Path& k, double epsilon);

struct LocalTimeEstimate {
  Path tanaka;
  Path occupation;
  double epsilon;
};
/// Both estimators; epsilon defaults to sqrt(dt) when <= 0 is passed.
LocalTimeEstimate local_time(const Path& k, double epsilon = 0.0);

enum class SigmaExample { abs, pos_part, drawdown };

/// The class-(Sigma) examples built from a path K with K_0 = 0:
///   abs      X = |K|,        A = L
///   pos_part X = K^+,        A = L/2
///   drawdown X = sup K - K,  A = sup K
/// with N = X - A so that X = N + A holds exactly.
SigmaTriple sigma_example_triple(const Path& k, SigmaExample kind);

}  // namespace sigma
