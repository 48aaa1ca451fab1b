#include <catch_amalgamated.hpp>

#include <cmath>

#include "sigma/generators.hpp"
#include "sigma/oracles.hpp"
#include "sigma/path_calculus.hpp"

using namespace sigma;
using Catch::Approx;

namespace {

McEstimate terminal(const GeneratorSpec& spec, std::uint64_t seed, std::size_t n,
                    double (*f)(double) = [](double v) { return v; }) {
  const Ensemble e = make_ensemble(spec, seed, n);
  std::vector<double> x;
  for (const Path& p : e.paths) x.push_back(f(p.back()));
  return estimate(x);
}

bool within(const McEstimate& e, double target, double k = 3.0) {
  return std::abs(e.mean - target) <= k * e.std_error;
}

}  // namespace

TEST_CASE("spec validation and key-value roundtrip") {
  GeneratorSpec s{Family::brownian_stopped_level, {{"a", 1.5}}, TimeGrid(4.0, 1024)};
  CHECK_NOTHROW(s.validate());
  const GeneratorSpec back = spec_from_kv({{"family", "brownian_stopped_level"}, {"horizon", "4"},
                                           {"n_steps", "1024"}, {"a", "1.5"}});
  CHECK(back.family == s.family);
  CHECK(back.grid == s.grid);
  CHECK(back.param("a") == 1.5);
  CHECK(to_kv(back) == to_kv(s));

  CHECK_THROWS_AS((GeneratorSpec{Family::brownian_stopped_level, {}, TimeGrid(1, 4)}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((GeneratorSpec{Family::brownian_stopped_level, {{"a", -1}}, TimeGrid(1, 4)}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((GeneratorSpec{Family::brownian_drift_stopped_line, {{"b", 0}}, TimeGrid(1, 4)}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((GeneratorSpec{Family::bessel3, {{"x0", 0}}, TimeGrid(1, 4)}.validate()), std::invalid_argument);
  CHECK_THROWS_AS(parse_family("levy"), std::invalid_argument);
  for (Family f : {Family::brownian, Family::brownian_stopped_level, Family::brownian_drift_stopped_line,
                   Family::exp_martingale, Family::bessel3, Family::scale_martingale}) {
    CHECK(parse_family(to_string(f)) == f);
  }
}

TEST_CASE("zero increments give the degenerate paths") {
  const TimeGrid g(2.0, 8);
  const std::vector<double> zero(8, 0.0);
  const Path b = brownian_from_increments(g, zero);
  for (double v : b.values()) CHECK(v == 0.0);
  const Path m = exp_martingale_from_brownian(b, std::nullopt);
  for (std::size_t j = 0; j < m.size(); ++j) CHECK(m[j] == Approx(std::exp(-g.time(j) / 2)));
  const Path r = bessel3_from_increments(g, 1.5, zero, zero, zero);
  for (double v : r.values()) CHECK(v == 1.5);
}

TEST_CASE("gen_brownian starts at 0 and sums the keyed increments") {
  const TimeGrid g(1.0, 64);
  const StreamKey key{9, 4, 0};
  const Path b = gen_brownian(g, key);
  const auto inc = gaussian_increments(g, key);
  CHECK(b[0] == 0.0);
  double s = 0.0;
  for (std::size_t j = 0; j < inc.size(); ++j) {
    s += inc[j];
    CHECK(b[j + 1] == s);
  }
}

TEST_CASE("Brownian terminal moments over 1e5 paths") {
  const GeneratorSpec spec{Family::brownian, {}, TimeGrid(2.0, 16)};
  const McEstimate mean = terminal(spec, 11, 100000);
  CHECK(within(mean, 0.0));
  const McEstimate sq = terminal(spec, 11, 100000, [](double v) { return v * v; });
  CHECK(within(sq, 2.0));
}

TEST_CASE("gen_stopped_hitting examples") {
  const TimeGrid g(1.0, 4);
  const Path ramp(g, {0, 0.25, 0.5, 0.75, 1.0});
  const StoppedPath s = gen_stopped_hitting(ramp, HittingRule::level(0.5));
  CHECK(s.stop_index == 2u);
  CHECK(s.path.back() == 0.5);
  CHECK_FALSE(gen_stopped_hitting(ramp, HittingRule::level(3.0)).stopped());
  // B + b t >= 1 with B = ramp, b = 1: 2 t >= 1 at t = 0.5.
  CHECK(gen_stopped_hitting(ramp, HittingRule::line(1.0)).stop_index == 2u);
}

TEST_CASE("gen_brownian_until matches the stopped full path") {
  const TimeGrid g(8.0, 20000);
  for (std::uint32_t i = 0; i < 20; ++i) {
    const StreamKey key{5, i, 0};
    for (const HittingRule rule : {HittingRule::level(0.7), HittingRule::line(0.5)}) {
      const StoppedPath fast = gen_brownian_until(g, key, rule);
      const StoppedPath full = gen_stopped_hitting(gen_brownian(g, key), rule);
      REQUIRE(fast.stop_index == full.stop_index);
      CHECK(std::equal(fast.path.values().begin(), fast.path.values().end(), full.path.values().begin()));
    }
  }
}

TEST_CASE("P(T_1 <= 1) against the reflection principle") {
  const GeneratorSpec spec{Family::brownian_stopped_level, {{"a", 1.0}}, TimeGrid(1.0, 4096)};
  const Ensemble e = make_ensemble(spec, 3, 100000);
  std::vector<double> hit;
  for (const Path& p : e.paths) hit.push_back(p.back() >= 1.0 ? 1.0 : 0.0);
  const McEstimate est = estimate(hit);
  // The grid only sees the path at grid points: hits are undercounted by
  // O(sqrt(dt)); the bias at dt = 1/4096 is about 0.012.
  const double exact = oracle::level_hit_probability(1.0, 1.0);
  CHECK(exact == Approx(0.3173).margin(1e-4));
  CHECK(est.mean < exact);
  CHECK(std::abs(est.mean - exact) <= 3 * est.std_error + 0.02);
}

TEST_CASE("exp martingale: mean one, positive, bounded when stopped at a level") {
  const GeneratorSpec spec{Family::exp_martingale, {}, TimeGrid(1.0, 64)};
  CHECK(within(terminal(spec, 17, 100000), 1.0));

  const TimeGrid g(4.0, 1024);
  for (std::uint32_t i = 0; i < 200; ++i) {
    const Path b = gen_brownian(g, {1, i, 0});
    const StoppedPath sb = gen_stopped_hitting(b, HittingRule::level(1.0));
    const Path m = gen_exp_martingale(g, {1, i, 0}, HittingRule::level(1.0));
    CHECK(m[0] == 1.0);
    double max_inc = 0.0;
    for (std::size_t j = 1; j < b.size(); ++j) max_inc = std::max(max_inc, std::abs(b[j] - b[j - 1]));
    for (double v : m.values()) {
      CHECK(v > 0.0);
      CHECK(v <= std::exp(1.0 + max_inc));
    }
    if (sb.stopped()) CHECK(m.back() == Approx(std::exp(sb.path.back() - g.time(*sb.stop_index) / 2)));
  }
}

TEST_CASE("Bessel(3) paths stay positive and 1/R is a strict local martingale") {
  const GeneratorSpec spec{Family::bessel3, {{"x0", 1.0}}, TimeGrid(1.0, 256)};
  const Ensemble e = make_ensemble(spec, 23, 100000);
  std::vector<double> inv, norm;
  for (const Path& p : e.paths) {
    REQUIRE(*std::min_element(p.values().begin(), p.values().end()) > 0.0);
    inv.push_back(1.0 / p.back());
  }
  const McEstimate est = estimate(inv);
  CHECK(within(est, oracle::bessel3_inverse_mean(1.0, 1.0)));
  CHECK(oracle::bessel3_inverse_mean(1.0, 1.0) == Approx(0.6827).margin(1e-4));
  CHECK(est.mean < 1.0 - 10 * est.std_error);
}

TEST_CASE("Bessel(3) terminal law: E[R_T^2] = x0^2 + 3T") {
  const GeneratorSpec spec{Family::bessel3, {{"x0", 2.0}}, TimeGrid(1.5, 8)};
  const McEstimate sq = terminal(spec, 29, 100000, [](double v) { return v * v; });
  CHECK(within(sq, 4.0 + 4.5));
}

TEST_CASE("Bessel(3) small-ball probability shrinks with epsilon") {
  const TimeGrid g(1.0, 2048);
  double prev = 2.0;
  std::vector<Path> paths;
  for (std::uint32_t i = 0; i < 4000; ++i) paths.push_back(gen_bessel3(g, 1.0, {31, i, 0}));
  for (double eps : {0.1, 0.05, 0.01}) {
    double hits = 0;
    for (const Path& p : paths) hits += *std::min_element(p.values().begin(), p.values().end()) < eps;
    const double rate = hits / paths.size();
    CHECK(rate <= prev);
    prev = rate;
  }
  CHECK(prev < 0.02);
}

TEST_CASE("scale_martingale examples") {
  const Path r2(TimeGrid(1.0, 2), {2, 2, 2});
  const Path flat = scale_martingale(r2, ScaleMode::normalized);
  for (double v : flat.values()) CHECK(v == 1.0);
  const Path r(TimeGrid(1.0, 2), {1, 2, 4});
  const Path m = scale_martingale(r, ScaleMode::neg_inverse);
  CHECK(m[0] == 1.0);
  CHECK(m[1] == 0.5);
  CHECK(m[2] == 0.25);
  CHECK_THROWS_AS(scale_martingale(Path(TimeGrid(1.0, 1), {1, 0}), ScaleMode::normalized), std::domain_error);
}

TEST_CASE("normalized scale martingale mean follows the Bessel oracle") {
  const GeneratorSpec spec{Family::scale_martingale, {{"x0", 1.0}, {"normalized", 1}}, TimeGrid(1.0, 256)};
  const McEstimate est = terminal(spec, 37, 100000);
  CHECK(within(est, oracle::bessel3_inverse_mean(1.0, 1.0) * 1.0));
}

TEST_CASE("ensembles: distinct seeds, shared grid, worker-count invariant") {
  const GeneratorSpec spec{Family::exp_martingale, {{"a", 1.0}}, TimeGrid(1.0, 128)};
  const Ensemble one = make_ensemble(spec, 99, 64, 1);
  const Ensemble four = make_ensemble(spec, 99, 64, 4);
  for (std::size_t i = 0; i < 64; ++i) {
    CHECK(one.paths[i].grid() == spec.grid);
    CHECK(std::equal(one.paths[i].values().begin(), one.paths[i].values().end(), four.paths[i].values().begin()));
    for (std::size_t j = 0; j < i; ++j) CHECK_FALSE(one.seeds[i] == one.seeds[j]);
  }
}

TEST_CASE("band exit rule") {
  const HittingRule r = HittingRule::band(-2.0, 1.0);
  CHECK(r.hit(0.0, 1.0));
  CHECK(r.hit(0.0, -2.0));
  CHECK_FALSE(r.hit(5.0, 0.5));
  const Path ramp(TimeGrid(1.0, 4), {0, -1, -2.5, -1, 2});
  const StoppedPath sp = gen_stopped_hitting(ramp, r);
  CHECK(sp.stop_index == std::optional<std::size_t>{2});
  CHECK(sp.path.back() == -2.5);
}
