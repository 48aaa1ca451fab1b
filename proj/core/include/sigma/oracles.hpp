#pragma once

// Closed-form reference values. Experiments and tests take their expected
// numbers from here rather than inlining constants.

#include <algorithm>
#include <cmath>

namespace sigma::oracle {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// P(T_a <= t) for standard Brownian motion, by the reflection principle.
inline double level_hit_probability(double a, double t) {
  return 2.0 * (1.0 - normal_cdf(a / std::sqrt(t)));
}

/// P(T_a > t) = 2 Phi(a / sqrt t) - 1.
inline double level_survival(double a, double t) { return 2.0 * normal_cdf(a / std::sqrt(t)) - 1.0; }

/// Exponent of P(T_a > t) ~ a sqrt(2/pi) t^{-1/2}.
inline constexpr double kLevelSurvivalTailSlope = -0.5;

/// Gambler's ruin: P(Brownian motion from 0 hits -a before b) = b / (a + b).
inline double hits_low_first(double a, double b = 1.0) { return b / (a + b); }

/// E_x[1/R_t] for Bessel(3) from x: (2 Phi(x/sqrt t) - 1) / x. Strictly
/// below 1/x for t > 0; 1/R is a strict local martingale.
inline double bessel3_inverse_mean(double x0, double t) {
  return (2.0 * normal_cdf(x0 / std::sqrt(t)) - 1.0) / x0;
}

/// P_r(Bessel(3) ever visits y) = (y / r) ^ 1.
inline double bessel3_visit_probability(double r, double y) { return std::min(y / r, 1.0); }

/// P(g_a > t | F_t) = (M_t / a) ^ 1 for a positive local martingale M
/// vanishing at infinity, g_a its last passage at a.
inline double last_passage_survival(double m, double a) { return std::min(m / a, 1.0); }

/// E[exp(-lambda sigma)] for sigma = inf{t : B_t + drift t = level},
/// drift >= 0: exp(level (drift - sqrt(drift^2 + 2 lambda))).
inline double drifted_hitting_laplace(double level, double drift, double lambda) {
  return std::exp(level * (drift - std::sqrt(drift * drift + 2.0 * lambda)));
}

/// E[exp(B_sigma - sigma/2)] for sigma = inf{t : B_t + b t = 1}. On
/// {sigma < inf}, B_sigma = 1 - b sigma, so the value is
/// e * E[exp(-(b + 1/2) sigma)].
inline double exp_martingale_at_line_hit(double b) {
  return std::exp(1.0) * drifted_hitting_laplace(1.0, b, b + 0.5);
}

/// E[L^0_{T_a}]: the local time at 0 collected before T_a is exponential
/// with mean 2a.
inline double local_time_before_level_mean(double a) { return 2.0 * a; }

}  // namespace sigma::oracle
