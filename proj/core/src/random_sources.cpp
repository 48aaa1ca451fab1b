#include "sigma/random_sources.hpp"

#include <cmath>
#include <limits>

namespace sigma {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

double poly(std::span<const double> c, double x) {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

double normal_quantile(double p) {
  // Coefficients of Wichura (1988), Algorithm AS 241, PPND16.
  static constexpr double a[] = {3.3871328727963666080e0, 1.3314166789178437745e+2,
                                 1.9715909503065514427e+3, 1.3731693765509461125e+4,
                                 4.5921953931549871457e+4, 6.7265770927008700853e+4,
                                 3.3430575583588128105e+4, 2.5090809287301226727e+3};
  static constexpr double b[] = {1.0, 4.2313330701600911252e+1, 6.8718700749205790830e+2,
                                 5.3941960214247511077e+3, 2.1213794301586595867e+4,
                                 3.9307895800092710610e+4, 2.8729085735721942674e+4,
                                 5.2264952788528545610e+3};
  static constexpr double c[] = {1.42343711074968357734e0, 4.63033784615654529590e0,
                                 5.76949722146069140550e0, 3.64784832476320460504e0,
                                 1.27045825245236838258e0, 2.41780725177450611770e-1,
                                 2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static constexpr double d[] = {1.0, 2.05319162663775882187e0, 1.67638483018380384940e0,
                                 6.89767334985100004550e-1, 1.48103976427480074590e-1,
                                 1.51986665636164571966e-2, 5.47593808499534494600e-4,
                                 1.05075007164441684324e-9};
  static constexpr double e[] = {6.65790464350110377720e0, 5.46378491116411436990e0,
                                 1.78482653991729133580e0, 2.96560571828504891230e-1,
                                 2.65321895265761230930e-2, 1.24266094738807843860e-3,
                                 2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr double f[] = {1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1,
                                 1.48753612908506148525e-2, 7.86869131145613259100e-4,
                                 1.84631831751005468180e-5, 1.42151175831644588870e-7,
                                 2.04426310338993978564e-15};

  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * poly(a, r) / poly(b, r);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    x = poly(c, r) / poly(d, r);
  } else {
    r -= 5.0;
    x = poly(e, r) / poly(f, r);
  }
  return q < 0.0 ? -x : x;
}

GaussianStream::GaussianStream(StreamKey key)
    : key_(key),
      philox_key_{static_cast<std::uint32_t>(key.master_seed),
                  static_cast<std::uint32_t>(key.master_seed >> 32)} {}

double GaussianStream::uniform(std::uint64_t index) const {
  // Two 64-bit outputs per Philox block.
  const std::uint64_t block = index >> 1;
  const auto out = philox4x32({static_cast<std::uint32_t>(block),
                               static_cast<std::uint32_t>(block >> 32), key_.path_index,
                               key_.substream},
                              philox_key_);
  const std::uint64_t bits = (index & 1u) == 0
                                 ? (static_cast<std::uint64_t>(out[0]) << 32) | out[1]
                                 : (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

void GaussianStream::fill_normal(std::uint64_t first, std::span<double> out) const {
  std::size_t i = 0;
  std::uint64_t index = first;
  constexpr double kScale = 0x1.0p-53;
  if ((index & 1u) == 1 && i < out.size()) {
    out[i++] = normal(index++);
  }
  for (; i + 1 < out.size(); i += 2, index += 2) {
    const std::uint64_t block = index >> 1;
    const auto w = philox4x32({static_cast<std::uint32_t>(block),
                               static_cast<std::uint32_t>(block >> 32), key_.path_index,
                               key_.substream},
                              philox_key_);
    const std::uint64_t b0 = (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
    const std::uint64_t b1 = (static_cast<std::uint64_t>(w[2]) << 32) | w[3];
    out[i] = normal_quantile((static_cast<double>(b0 >> 11) + 0.5) * kScale);
    out[i + 1] = normal_quantile((static_cast<double>(b1 >> 11) + 0.5) * kScale);
  }
  if (i < out.size()) out[i] = normal(index);
}

std::vector<double> gaussian_increments(const TimeGrid& grid, const StreamKey& key) {
  std::vector<double> out(grid.n_steps());
  GaussianStream(key).fill_normal(0, out);
  const double sd = std::sqrt(grid.dt());
  for (double& x : out) x *= sd;
  return out;
}

}  // namespace sigma
