#pragma once

// Monte Carlo experiments: the integrability lemma, Azema's conditional
// laws of last-passage times, M_inf = 2 I_inf, saturated and non-saturated
// sets, and heavy-tail remarks.
//
// Every experiment is a pure function of its parameters and the master
// seed. Path i always draws from StreamKey{seed, i, .}; per-path results
// land in slot i and are reduced in index order, so worker count never
// changes a result.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sigma/decompositions.hpp"
#include "sigma/generators.hpp"
#include "sigma/grid_paths.hpp"
#include "sigma/report.hpp"

namespace sigma {

struct RunOptions {
  std::uint64_t seed = 20240611;
  std::size_t n_paths = 1000;
  unsigned workers = 0;
};

/// Largest index in [0, horizon_index] where the predicate holds.
std::optional<std::size_t> honest_time(const Path& path, const IndexPredicate& predicate,
                                       std::size_t horizon_index);

// ---------------------------------------------------------------------------
// E[M_T C_T] = 1 + E[int_0^T M dC] with C = 1/I.

struct LemmaBalanceResult {
  McEstimate e_mc;       // E[M_T C_T]
  McEstimate e_int;      // 1 + E[sum M_{i+1} (C_{i+1} - C_i)]
  McEstimate e_int_left; // 1 + E[sum M_i (C_{i+1} - C_i)], diagnostic only
  McEstimate m_t;        // E[M_T], martingale-mean check
  double difference = 0.0;
  double combined_stderr = 0.0;
  double z_score = 0.0;
  bool agree = false;
  bool degenerate = false;
};

LemmaBalanceResult summarize_lemma_balance(std::span<const ClassDSample> samples);
LemmaBalanceResult lemma_balance(std::span<const Path> martingales);
/// Families: exp_martingale (optionally stopped), scale_martingale, and
/// bessel3 (read as its normalized scale martingale x0/R).
LemmaBalanceResult lemma_balance_experiment(const GeneratorSpec& spec, const RunOptions& run);

/// The three true-martingale specs the balance is asserted on.
std::vector<GeneratorSpec> shipped_lemma_specs();

// ---------------------------------------------------------------------------
// P(g > t | F_t) for the last passage g of a transient process at a level.

struct AzemaParams {
  Family family = Family::bessel3;  // bessel3 or exp_martingale
  double x0 = 1.0;                  // R_0, or M_0 for exp_martingale
  double level = 1.0;               // y for bessel3, a for exp_martingale
  double t = 1.0;
  double horizon = 64.0;
  std::size_t n_steps = 16384;
  std::vector<double> bin_edges;    // empty: family default
  std::size_t min_bin_count = 200;
  double censoring_target = 0.05;
};

struct ConditionalBin {
  double lo = 0.0;
  double hi = 0.0;  // +inf for the open last bin
  double midpoint = 0.0;
  double centroid = 0.0;  // mean state in the bin; the formula is evaluated here
  McEstimate empirical;   // censoring-completed estimate of P(g > t | state)
  McEstimate censored;    // raw within-horizon estimate
  double formula = 0.0;
  double abs_diff = 0.0;
  double tolerance = 0.0;
};

struct ConditionalLawTable {
  std::vector<ConditionalBin> bins;
  double t = 0.0;
  double censoring_rate = 0.0;
  double max_abs_diff = 0.0;
  bool within_tolerance = false;
  std::size_t n_paths = 0;
  std::vector<std::string> notes;
  std::vector<std::string> warnings;
};

ConditionalLawTable azema_conditional_experiment(const AzemaParams& params, const RunOptions& run);

// ---------------------------------------------------------------------------
// M_inf = 2 I_inf for the Azema submartingale of g_y of Bessel(3).

struct TwoInfinityParams {
  double x0 = 1.0;
  double y = 1.0;
  std::vector<double> horizons{4, 8, 16, 32, 64};
  std::size_t steps_per_unit = 256;
};

struct TwoInfinityPoint {
  double horizon = 0.0;
  double median_gap = 0.0;
  McEstimate gap;
};

struct TwoInfinityResult {
  std::vector<TwoInfinityPoint> points;
  bool nonincreasing = false;
  std::size_t invalid_paths = 0;  // X left [0, 1] beyond 1e-9
};

/// |M~_T - 2 I~_T| at `index`, with M~ = (1 + X) exp(-A) and I~ its running
/// minimum.
double two_infinity_gap(const Path& x, const Path& a, std::size_t index);
TwoInfinityResult two_infinity_check(const TwoInfinityParams& params, const RunOptions& run);

// ---------------------------------------------------------------------------
// Saturated and non-saturated sets for Brownian motion stopped at T_1.

struct TailReport {
  std::vector<double> levels;
  std::vector<McEstimate> empirical_survival;
  std::vector<std::optional<double>> reference;
  std::vector<std::size_t> resolved;  // paths whose outcome is known at each level
};

enum class SaturationKind { saturated_level_set, nonsaturated_zero_set };

struct SaturationParams {
  double horizon = 64.0;
  std::size_t n_steps = 262144;
  std::vector<double> levels{1, 2, 4};
  /// Keep adding paths until every level has this many resolved paths
  /// (0: exactly run.n_paths paths).
  std::size_t target_resolved = 0;
  /// Stop paths at the first exit from (-exit_floor, 1) instead of at T_1.
  /// Survival at levels <= exit_floor is unchanged; the L, g and membership
  /// statistics then cover only the paths that reached 1.
  std::optional<double> exit_floor;
};

struct SaturationResult {
  SaturationKind kind = SaturationKind::nonsaturated_zero_set;
  TailReport survival;          // of -I_{T_1} = |B_L|
  std::size_t n_paths = 0;
  std::size_t censored = 0;     // T_1 beyond the horizon
  std::vector<double> x_l;      // |B_L| on uncensored paths
  double positive_x_l_rate = 0.0;  // X_L > 0: L is a non-zero of X left of g
  double l_before_g_rate = 0.0;
  double membership_rate = 0.0;    // B at the end of {B = I} lies in {B <= 0}
};

SaturationResult saturation_probe(SaturationKind kind, const SaturationParams& params,
                                  const RunOptions& run);

// ---------------------------------------------------------------------------
// Heavy tail of T_a and the line-hitting exponential martingale.

enum class TailKind { level_heavy_tail, line_hit_expectation };

struct TailParams {
  double a = 1.0;
  double b = 1.0;
  double horizon = 64.0;
  std::size_t n_steps = 16384;
  std::vector<double> times{1, 2, 4, 8, 16, 32, 64};
  double fit_from = 4.0;
};

struct TailResult {
  TailKind kind = TailKind::level_heavy_tail;
  TailReport survival;            // P(T_a > t)
  double slope = 0.0;             // least-squares log-log slope over t >= fit_from
  double slope_reference = -0.5;
  McEstimate line_value;          // exp(B_sigma - sigma/2) on uncensored paths
  McEstimate stopped_value;       // exp(B_{sigma^H} - (sigma^H)/2) on all paths
  double censoring_rate = 0.0;
  double laplace_reference = 0.0;
  std::string side_of_one;        // "below", "above" or "indistinguishable" at 3 stderr
  std::size_t n_paths = 0;
  std::vector<std::string> warnings;
};

TailResult tail_experiment(TailKind kind, const TailParams& params, const RunOptions& run);

// ---------------------------------------------------------------------------

ClassDReport class_d_experiment(const GeneratorSpec& spec, const RunOptions& run);

// ---------------------------------------------------------------------------
// Registry shared by the CLI and the verification suites.

struct ExperimentConfig {
  RunOptions run;
  std::optional<std::string> family;
  std::optional<double> horizon;
  std::optional<std::size_t> n_steps;
  std::map<std::string, double> params;  // x0, a, b, y, t

  double param_or(const std::string& key, double fallback) const;
};

struct ExperimentEntry {
  std::string name;
  std::string description;
  std::function<ExperimentReport(const ExperimentConfig&)> run;
};

const std::vector<ExperimentEntry>& experiment_registry();
const ExperimentEntry* find_experiment(const std::string& name);

// Report builders.
ExperimentReport make_report(const LemmaBalanceResult& r, const GeneratorSpec& spec, const RunOptions& run);
ExperimentReport make_report(const ConditionalLawTable& r, const AzemaParams& p, const RunOptions& run);
ExperimentReport make_report(const TwoInfinityResult& r, const TwoInfinityParams& p, const RunOptions& run);
ExperimentReport make_report(const SaturationResult& r, const SaturationParams& p, const RunOptions& run);
ExperimentReport make_report(const TailResult& r, const TailParams& p, const RunOptions& run);
ExperimentReport make_report(const ClassDReport& r, const GeneratorSpec& spec, const RunOptions& run);

}  // namespace sigma
