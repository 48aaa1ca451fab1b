#pragma once

// Counter-based Gaussian streams. Every draw is a pure function of
// (master_seed, path_index, substream, draw_index), so any worker can
// produce any part of any stream without shared state.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sigma/grid_paths.hpp"

namespace sigma {

struct StreamKey {
  std::uint64_t master_seed = 0;
  std::uint32_t path_index = 0;
  std::uint32_t substream = 0;

  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3").
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Standard normal quantile, Wichura's AS241 (PPND16); relative accuracy
/// about 1e-16 on (0, 1).
double normal_quantile(double p);

/// Name of the uniform-to-Gaussian transform, echoed into reports.
inline constexpr const char* kGaussianTransform = "philox4x32-10 + inverse-cdf (AS241)";

class GaussianStream {
 public:
  explicit GaussianStream(StreamKey key);

  /// Uniform on (0, 1) with 53 random bits, never 0 or 1.
  double uniform(std::uint64_t index) const;
  /// Standard normal draw number `index`.
  double normal(std::uint64_t index) const { return normal_quantile(uniform(index)); }

  /// Standard normals [first, first + out.size()).
  void fill_normal(std::uint64_t first, std::span<double> out) const;

  const StreamKey& key() const { return key_; }

 private:
  StreamKey key_;
  std::array<std::uint32_t, 2> philox_key_;
};

/// n = grid.n_steps() independent N(0, dt) increments.
std::vector<double> gaussian_increments(const TimeGrid& grid, const StreamKey& key);

}  // namespace sigma
