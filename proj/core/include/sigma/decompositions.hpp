#pragma once

// Multiplicative decomposition Y + 1 = M C of a nonnegative submartingale,
// the class-(Sigma) construction X = M/I - 1, and class-(D) diagnostics.

#include <span>
#include <string>
#include <vector>

#include "sigma/grid_paths.hpp"
#include "sigma/sigma_triple.hpp"

namespace sigma {

/// Y = M C - 1 with M > 0, M_0 = 1, C nondecreasing, C_0 = 1.
struct MultDecomp {
  Path martingale_part;  // M
  Path increasing_part;  // C
  Path source;           // Y
};

/// Y = M C - 1. Throws std::invalid_argument naming the failed
/// precondition and the first offending index.
Path mult_compose(const Path& m, const Path& c);

/// How the dl/(1 + Y) sum weights Y on each step.
enum class StepWeight { left, midpoint };

/// C_j = exp(sum_{i<j} (l_{i+1} - l_i) / (1 + Y_i)), M = (1 + Y) / C, for Y
/// with Doob-Meyer increasing part l.
MultDecomp mult_decompose(const Path& y, const Path& ell, StepWeight weight = StepWeight::left);

/// The same M through the exponential of the martingale part m of Y:
///   M = exp(int dm/(1+Y) - 1/2 int d<m>/(1+Y)^2).
Path mult_decompose_exp(const Path& m, const Path& y);

/// X = M/I - 1, A = log(1/I), N = X - A for a positive path M with M_0 = 1.
SigmaTriple sigma_compose(const Path& m);

/// sup_j |N_j - int_0^{t_j} dM/I|: distance between the stored martingale
/// part and its stochastic-integral form.
double sigma_integral_gap(const SigmaTriple& triple, const Path& m);

/// M = (1 + X) exp(-A).
Path sigma_martingale(const Path& x, const Path& a);

/// Share of the growth of A spent on steps whose endpoints both sit
/// above the zero band: sum over {min(X_i, X_{i+1}) > eps} of
/// (A_{i+1} - A_i), divided by max(A_n, tiny).
struct CarriedVerdict {
  double score = 0.0;
  bool carried = true;
};
inline constexpr double kCarriedThreshold = 0.05;
CarriedVerdict carried_by_zeros(const Path& x, const Path& a, double epsilon,
                                double threshold = kCarriedThreshold);

/// min_j (M_j C_j - M_j / I_j), the distance from Y = M C - 1 down to
/// the class-(Sigma) element Y* = M/I - 1.
double minimality_gap(const Path& m, const Path& c);

/// Per-path quantities feeding class-(D) diagnostics.
struct ClassDSample {
  double m_c = 0.0;          // M_T C_T with C = 1/I
  double int_m_dc = 0.0;     // 1 + sum M_{i+1} (C_{i+1} - C_i)
  double int_m_dc_left = 0.0;  // 1 + sum M_i (C_{i+1} - C_i)
  double log_inv_i = 0.0;    // log(1/I_T)
  double qv_u = 0.0;         // <U>_T, U = int dM/M
  double log_identity_err = 0.0;  // sup_j |log(1/M_j) + U_j - <U>_j / 2|
  double inf_identity_err = 0.0;  // |log(1/I_T) + min_j(U_j - <U>_j / 2)|
  double m_t = 0.0;          // M_T, for drift and tail proxies
};
ClassDSample class_d_sample(const Path& m);

struct ClassDReport {
  McEstimate e_mc;
  McEstimate e_int;
  McEstimate e_log_inv_i;
  McEstimate e_qv_u;
  double horizon = 0.0;
  std::size_t n_paths = 0;
  double pathwise_log_identity_median_err = 0.0;
  double pathwise_inf_identity_median_err = 0.0;
  // Uniform-integrability proxies.
  McEstimate m_t_mean;
  double m_t_tail_mass = 0.0;  // share of E[M_T] from paths with M_T > 10
};
ClassDReport summarize_class_d(std::span<const ClassDSample> samples, double horizon);
ClassDReport class_d_diagnostics(std::span<const Path> martingales);

std::string to_json(const ClassDReport& report);

}  // namespace sigma
