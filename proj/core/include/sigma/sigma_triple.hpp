#pragma once

#include "sigma/grid_paths.hpp"

namespace sigma {

/// X = N + A with X >= 0, X_0 = N_0 = A_0 = 0, A nondecreasing, and dA
/// carried by the zero set of X (checked on the grid through an
/// epsilon-band, see carried_by_zeros).
struct SigmaTriple {
  Path submartingale;    // X
  Path martingale_part;  // N
  Path increasing_part;  // A
  double zero_threshold = 0.0;
};

/// Default zero-band half width for a grid: 2 sqrt(dt).
double default_zero_threshold(const TimeGrid& grid);

}  // namespace sigma
