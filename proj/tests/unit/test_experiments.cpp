#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "sigma/experiments.hpp"
#include "sigma/oracles.hpp"

using namespace sigma;
using Catch::Approx;

namespace {

Path make(std::vector<double> v) {
  const TimeGrid g(1.0, v.size() - 1);
  return Path(g, std::move(v));
}

}  // namespace

TEST_CASE("honest_time examples") {
  const Path p = make({0, 1, 0, 2});
  auto at_zero = [](std::size_t, double v) { return v == 0.0; };
  CHECK(honest_time(p, at_zero, 3) == std::optional<std::size_t>{2});
  CHECK(honest_time(p, at_zero, 1) == std::optional<std::size_t>{0});
  CHECK_FALSE(honest_time(p, [](std::size_t, double v) { return v > 5.0; }, 3).has_value());

  const Path down = make({3, 2, 1, 0});
  std::vector<double> inf{3, 2, 1, 0};
  CHECK(honest_time(down, [&](std::size_t j, double v) { return v == inf[j]; }, 3) == std::optional<std::size_t>{3});
  CHECK(honest_time(p, at_zero, 40) == std::optional<std::size_t>{2});
}

TEST_CASE("conditional law formula of a last passage") {
  // (m / a) ^ 1 for a martingale tending to 0; for Bessel(3) m = 1/R, a = 1/y.
  CHECK(oracle::last_passage_survival(0.5, 1.0) == 0.5);
  CHECK(oracle::last_passage_survival(2.0, 1.0) == 1.0);
  CHECK(oracle::last_passage_survival(1.0 / 2.0, 1.0 / 1.0) == 0.5);
  CHECK(oracle::last_passage_survival(1.0 / 0.5, 1.0 / 1.0) == 1.0);
}

TEST_CASE("two_infinity_gap against the closed form") {
  const Path x = make({0, 0.5, 0.0, 0.25});
  const Path a = make({0, 0, 0.3, 0.3});
  std::vector<double> m(4), inf(4);
  for (std::size_t j = 0; j < 4; ++j) {
    m[j] = (1.0 + x[j]) * std::exp(-a[j]);
    inf[j] = j ? std::min(inf[j - 1], m[j]) : m[j];
  }
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(two_infinity_gap(x, a, j) == Approx(std::abs(m[j] - 2.0 * inf[j])).margin(1e-15));
  }
  // Where X = 0 the gap is exp(-A).
  CHECK(two_infinity_gap(x, a, 2) == Approx(std::exp(-0.3)));
  CHECK_THROWS_AS(two_infinity_gap(x, a, 4), std::invalid_argument);
}

TEST_CASE("lemma balance agrees on the shipped specs at small scale") {
  const auto specs = shipped_lemma_specs();
  REQUIRE(specs.size() == 3);
  for (const auto& spec : specs) {
    const LemmaBalanceResult r = lemma_balance_experiment(spec, {20240611, 4000, 1});
    CHECK(r.agree);
    CHECK(std::abs(r.z_score) <= 3.0);
    CHECK(std::abs(r.m_t.mean - 1.0) <= 4.0 * r.m_t.std_error + 1e-12);
  }
  const GeneratorSpec bm{Family::brownian, {}, TimeGrid(1.0, 16)};
  CHECK_THROWS_AS(lemma_balance_experiment(bm, {1, 10, 1}), std::invalid_argument);
}

TEST_CASE("lemma balance with identical paths is degenerate, not an error") {
  const std::vector<Path> ones(4, Path::constant(TimeGrid(1.0, 4), 1.0));
  const LemmaBalanceResult r = lemma_balance(ones);
  CHECK(r.e_mc.mean == 1.0);
  CHECK(r.e_int.mean == 1.0);
  CHECK(r.agree);
}

TEST_CASE("Azema conditional law at reduced scale") {
  AzemaParams p;
  p.horizon = 16.0;
  p.n_steps = 4096;
  const ConditionalLawTable t = azema_conditional_experiment(p, {7, 6000, 1});
  REQUIRE_FALSE(t.bins.empty());
  CHECK(t.within_tolerance);
  for (const auto& b : t.bins) {
    CHECK(b.formula == Approx(std::min(1.0 / b.centroid, 1.0)));
    CHECK(b.centroid >= b.lo);
    CHECK(b.centroid <= b.hi);
  }
  CHECK(t.bins.back().formula < 1.0);

  AzemaParams bad = p;
  bad.t = 16.0;
  CHECK_THROWS_AS(azema_conditional_experiment(bad, {7, 10, 1}), std::invalid_argument);
  bad = p;
  bad.x0 = 2.0;
  CHECK_THROWS_AS(azema_conditional_experiment(bad, {7, 10, 1}), std::invalid_argument);
}

TEST_CASE("saturated set: membership on every uncensored path") {
  SaturationParams p;
  p.horizon = 16.0;
  p.n_steps = 16384;
  const SaturationResult r = saturation_probe(SaturationKind::saturated_level_set, p, {3, 400, 1});
  CHECK(r.n_paths == 400);
  CHECK(r.censored < r.n_paths);
  CHECK(r.membership_rate == 1.0);
  CHECK(r.x_l.size() == r.n_paths - r.censored);
  CHECK(r.positive_x_l_rate > 0.9);
}

TEST_CASE("gambler's ruin at reduced scale") {
  SaturationParams p;
  p.horizon = 64.0;
  p.n_steps = 65536;
  p.levels = {1.0};
  const SaturationResult r = saturation_probe(SaturationKind::nonsaturated_zero_set, p, {5, 3000, 1});
  const McEstimate& e = r.survival.empirical_survival[0];
  CHECK(std::abs(e.mean - 0.5) <= 3.0 * e.std_error + 0.01);
  CHECK(r.survival.reference[0] == Approx(0.5));
}

TEST_CASE("an exit floor leaves the survival estimates unchanged") {
  SaturationParams p;
  p.horizon = 16.0;
  p.n_steps = 8192;
  p.levels = {1.0, 2.0};
  const SaturationResult full = saturation_probe(SaturationKind::nonsaturated_zero_set, p, {21, 500, 1});
  p.exit_floor = 2.0;
  const SaturationResult cut = saturation_probe(SaturationKind::nonsaturated_zero_set, p, {21, 500, 1});
  for (std::size_t l = 0; l < 2; ++l) {
    CHECK(cut.survival.empirical_survival[l].mean == full.survival.empirical_survival[l].mean);
    CHECK(cut.survival.resolved[l] == full.survival.resolved[l]);
  }
  CHECK(cut.censored <= full.censored);
  p.exit_floor = 1.5;
  CHECK_THROWS_AS(saturation_probe(SaturationKind::nonsaturated_zero_set, p, {21, 10, 1}), std::invalid_argument);
}

TEST_CASE("first passage survival at t = 1 matches 2 Phi(1) - 1") {
  TailParams p;
  p.horizon = 4.0;
  p.n_steps = 4096;
  p.times = {1, 2, 4};
  p.fit_from = 1.0;
  const TailResult r = tail_experiment(TailKind::level_heavy_tail, p, {11, 20000, 1});
  const McEstimate& s1 = r.survival.empirical_survival[0];
  const double exact = oracle::level_survival(1.0, 1.0);
  CHECK(exact == Approx(0.682689).margin(1e-6));
  // Grid monitoring misses crossings, so the bias is upward.
  CHECK(s1.mean - exact <= 3.0 * s1.std_error + 0.02);
  CHECK(s1.mean - exact >= -3.0 * s1.std_error);
  CHECK(r.slope < 0.0);
}

TEST_CASE("line hitting: censoring falls as the horizon doubles") {
  double prev = 1.0;
  for (double h : {2.0, 4.0, 8.0}) {
    TailParams p;
    p.b = 0.5;
    p.horizon = h;
    p.n_steps = static_cast<std::size_t>(256 * h);
    const TailResult r = tail_experiment(TailKind::line_hit_expectation, p, {13, 2000, 1});
    CHECK(r.censoring_rate < prev);
    prev = r.censoring_rate;
    CHECK(r.laplace_reference == Approx(1.0));
    CHECK((r.side_of_one == "below" || r.side_of_one == "above" || r.side_of_one == "indistinguishable"));
  }
  TailParams bad;
  bad.b = 0.0;
  CHECK_THROWS_AS(tail_experiment(TailKind::line_hit_expectation, bad, {1, 10, 1}), std::invalid_argument);
}

TEST_CASE("two-infinity gap shrinks at reduced scale") {
  TwoInfinityParams p;
  p.horizons = {4, 16};
  p.steps_per_unit = 64;
  const TwoInfinityResult r = two_infinity_check(p, {17, 300, 1});
  REQUIRE(r.points.size() == 2);
  CHECK(r.points[1].median_gap < r.points[0].median_gap);
  CHECK(r.invalid_paths == 0);
  p.y = 2.0;
  CHECK_THROWS_AS(two_infinity_check(p, {17, 10, 1}), std::invalid_argument);
}

TEST_CASE("experiment registry") {
  std::vector<std::string> names;
  for (const auto& e : experiment_registry()) names.push_back(e.name);
  CHECK(names == std::vector<std::string>{"lemma-balance", "azema-conditional", "two-infinity", "saturation-probe",
                                          "saturated-set", "heavy-tail", "sigma-b", "class-d"});
  CHECK(find_experiment("class-d") != nullptr);
  CHECK(find_experiment("nope") == nullptr);
}

TEST_CASE("reports are identical across worker counts") {
  ExperimentConfig c;
  c.run = {99, 300, 1};
  c.horizon = 4.0;
  c.n_steps = 512;
  for (const char* name : {"lemma-balance", "heavy-tail", "class-d", "sigma-b"}) {
    const auto* e = find_experiment(name);
    REQUIRE(e);
    const std::string one = to_json(e->run(c));
    CHECK(one == to_json(e->run(c)));
    ExperimentConfig c3 = c;
    c3.run.workers = 3;
    CHECK(one == to_json(e->run(c3)));
    ExperimentConfig other = c;
    other.run.seed = 100;
    CHECK(one != to_json(e->run(other)));
  }
}

TEST_CASE("lemma-balance report carries the verdict") {
  ExperimentConfig c;
  c.run = {5, 500, 1};
  const ExperimentReport rep = find_experiment("lemma-balance")->run(c);
  const auto j = nlohmann::json::parse(to_json(rep));
  CHECK(j["experiment"] == "lemma-balance");
  CHECK(j["results"][0].contains("ci_agreement"));
  CHECK(j["seed"] == 5);
  CHECK_FALSE(rep.tables.empty());
}
