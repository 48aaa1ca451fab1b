#include <catch_amalgamated.hpp>

#include <cmath>
#include <nlohmann/json.hpp>

#include "sigma/decompositions.hpp"
#include "sigma/generators.hpp"
#include "sigma/path_calculus.hpp"

using namespace sigma;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

std::vector<double> vals(const Path& p) { return {p.values().begin(), p.values().end()}; }
Path make(std::vector<double> v) {
  const TimeGrid g(1.0, v.size() - 1);
  return Path(g, std::move(v));
}

double sup_dist(const Path& a, const Path& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

Path one_plus_t(const TimeGrid& g) {
  std::vector<double> v = g.times();
  for (double& x : v) x += 1.0;
  return Path(g, v);
}

Path abs_path(const Path& b) {
  std::vector<double> v(b.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::abs(b[j]);
  return Path(b.grid(), v);
}

}  // namespace

TEST_CASE("mult_compose examples") {
  const TimeGrid g(1.0, 4);
  const Path zero = mult_compose(Path::constant(g, 1), Path::constant(g, 1));
  for (double v : zero.values()) CHECK(v == 0.0);
  const Path y = mult_compose(Path::constant(g, 1), one_plus_t(g));
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(y[j] == Approx(g.time(j)));
  CHECK_THROWS_WITH(mult_compose(make({1, 0.5, 0.5}), make({1, 1.5, 1.5})), ContainsSubstring("index 1"));
  CHECK_THROWS_WITH(mult_compose(make({1, 1, 1}), make({1, 2, 1.5})), ContainsSubstring("nondecreasing"));
  CHECK_THROWS_WITH(mult_compose(make({2, 1}), make({1, 1})), ContainsSubstring("M_0"));
}

TEST_CASE("mult_decompose trivial and error cases") {
  const TimeGrid g(1.0, 8);
  const MultDecomp d = mult_decompose(Path::constant(g, 0), Path::constant(g, 0));
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(d.martingale_part[j] == 1.0);
    CHECK(d.increasing_part[j] == 1.0);
  }
  CHECK_THROWS_AS(mult_decompose(make({0, 1, 1}), make({0, 1, 0.5})), std::invalid_argument);
  CHECK_THROWS_AS(mult_decompose(make({0, -1e-9, 1}), make({0, 1, 2})), std::invalid_argument);
  CHECK_NOTHROW(mult_decompose(make({0, -1e-13, 1}), make({0, 1, 2})));
}

TEST_CASE("mult_decompose with Y = t, ell = t converges to C = 1 + t, M = 1") {
  double prev_c = 1.0, prev_m = 1.0;
  for (std::size_t n : {64, 256, 1024, 4096}) {
    const TimeGrid g(1.0, n);
    const Path t(g, g.times());
    const MultDecomp d = mult_decompose(t, t);
    const double ec = sup_dist(d.increasing_part, one_plus_t(g));
    const double em = sup_dist(d.martingale_part, Path::constant(g, 1.0));
    CHECK(ec <= 2.0 * g.dt());
    CHECK(ec < prev_c);
    CHECK(em < prev_m);
    prev_c = ec;
    prev_m = em;
    // The oracle: log C_T = int dt / (1 + t) = log 2.
    CHECK(std::log(d.increasing_part.back()) == Approx(std::log(2.0)).margin(g.dt()));
    const MultDecomp mid = mult_decompose(t, t, StepWeight::midpoint);
    CHECK(sup_dist(mid.increasing_part, one_plus_t(g)) < ec);
  }
}

TEST_CASE("MultDecomp invariant: M C = Y + 1") {
  const TimeGrid g(1.0, 4096);
  const Path b = gen_brownian(g, {4, 0, 0});
  const Path y = abs_path(b);
  const MultDecomp d = mult_decompose(y, local_time_tanaka(b));
  CHECK(d.martingale_part[0] == 1.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(std::abs(d.martingale_part[j] * d.increasing_part[j] - (y[j] + 1.0)) <= 1e-10);
    CHECK(d.martingale_part[j] > 0.0);
    if (j) CHECK(d.increasing_part[j] >= d.increasing_part[j - 1]);
  }
}

TEST_CASE("Y = |B|, ell = L: log C approaches L under refinement") {
  const TimeGrid fine(1.0, std::size_t{1} << 16);
  std::vector<double> coarse_err, fine_err;
  for (std::uint32_t i = 0; i < 50; ++i) {
    const Path b = gen_brownian(fine, {12, i, 0});
    for (int r = 0; r < 2; ++r) {
      const Path p = r ? b : b.subsampled(16);
      const Path l = local_time_tanaka(p);
      const MultDecomp d = mult_decompose(abs_path(p), l);
      double e = 0.0;
      for (std::size_t j = 0; j < p.size(); ++j) e = std::max(e, std::abs(std::log(d.increasing_part[j]) - l[j]));
      (r ? fine_err : coarse_err).push_back(e);
    }
  }
  CHECK(median(fine_err) < 0.5 * median(coarse_err));
  CHECK(median(fine_err) < 0.02);
}

TEST_CASE("mult_decompose_exp examples") {
  const TimeGrid g(1.0, 16);
  const Path b = gen_brownian(g, {1, 1, 0});
  const Path flat = mult_decompose_exp(Path::constant(g, 0), abs_path(b));
  for (double v : flat.values()) CHECK(v == 1.0);
  CHECK_THROWS_AS(mult_decompose_exp(make({1, 1}), make({0, 0})), std::invalid_argument);
  CHECK_THROWS_AS(mult_decompose_exp(Path::constant(g, 0), make({0, 0})), std::invalid_argument);
}

TEST_CASE("the two martingale formulas converge to each other") {
  const TimeGrid fine(1.0, std::size_t{1} << 16);
  std::vector<double> coarse, finer;
  for (std::uint32_t i = 0; i < 50; ++i) {
    const Path b = gen_brownian(fine, {13, i, 0});
    for (int r = 0; r < 2; ++r) {
      const Path p = r ? b : b.subsampled(4);
      const Path l = local_time_tanaka(p);
      const Path y = abs_path(p);
      std::vector<double> m(p.size());
      for (std::size_t j = 0; j < m.size(); ++j) m[j] = y[j] - l[j];
      const double d = sup_dist(mult_decompose(y, l).martingale_part, mult_decompose_exp(Path(p.grid(), m), y));
      (r ? finer : coarse).push_back(d);
    }
  }
  CHECK(median(finer) < median(coarse));
}

TEST_CASE("sigma_compose examples") {
  const TimeGrid g(1.0, 10);
  const SigmaTriple one = sigma_compose(Path::constant(g, 1));
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(one.submartingale[j] == 0.0);
    CHECK(one.increasing_part[j] == 0.0);
    CHECK(one.martingale_part[j] == 0.0);
  }
  std::vector<double> decay(g.size());
  for (std::size_t j = 0; j < decay.size(); ++j) decay[j] = std::exp(-g.time(j));
  const SigmaTriple d = sigma_compose(Path(g, decay));
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(d.submartingale[j] == 0.0);
    CHECK(d.increasing_part[j] == Approx(g.time(j)).margin(1e-15));
  }
  const SigmaTriple s = sigma_compose(make({1, 2, 0.5}));
  CHECK(vals(s.submartingale) == std::vector<double>{0, 1, 0});
  CHECK(s.increasing_part[0] == 0.0);
  CHECK(s.increasing_part[1] == 0.0);
  CHECK(s.increasing_part[2] == Approx(std::log(2.0)));
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(s.submartingale[j] == s.martingale_part[j] + s.increasing_part[j]);
  }
  CHECK_THROWS_AS(sigma_compose(make({1, 0, 1})), std::invalid_argument);
  CHECK_THROWS_AS(sigma_compose(make({1, -1})), std::invalid_argument);
}

TEST_CASE("N = X - A against the integral form int dM / I under refinement") {
  std::vector<double> coarse, fine;
  const TimeGrid g(1.0, std::size_t{1} << 14);
  for (std::uint32_t i = 0; i < 30; ++i) {
    const Path m = gen_exp_martingale(g, {14, i, 0});
    const Path mc = m.subsampled(16);
    fine.push_back(sigma_integral_gap(sigma_compose(m), m));
    coarse.push_back(sigma_integral_gap(sigma_compose(mc), mc));
  }
  CHECK(median(fine) < median(coarse));
}

TEST_CASE("sigma_martingale examples") {
  const TimeGrid g(1.0, 5);
  const Path unit = sigma_martingale(Path::constant(g, 0), Path::constant(g, 0));
  for (double v : unit.values()) CHECK(v == 1.0);
  CHECK_THROWS_AS(sigma_martingale(make({0, -1}), make({0, 0})), std::invalid_argument);
  CHECK_THROWS_AS(sigma_martingale(make({0.5, 1}), make({0, 0})), std::invalid_argument);
  CHECK_THROWS_AS(sigma_martingale(make({0, 1}), make({0, -1})), std::invalid_argument);

  const TimeGrid h(1.0, 1000);
  const Path k = gen_brownian(h, {15, 0, 0});
  const SigmaTriple dd = sigma_example_triple(k, SigmaExample::drawdown);
  const Path m = sigma_martingale(dd.submartingale, dd.increasing_part);
  const Path sup = running_extremum(k, Extremum::max);
  for (std::size_t j = 0; j < h.size(); ++j) {
    CHECK(std::abs(m[j] - (1.0 + sup[j] - k[j]) * std::exp(-sup[j])) <= 1e-12);
  }
}

TEST_CASE("|B| with Tanaka L: sigma roundtrip recovers X and A under refinement") {
  const TimeGrid fine(1.0, std::size_t{1} << 16);
  std::vector<double> ex[2], ea[2];
  for (std::uint32_t i = 0; i < 50; ++i) {
    const Path b = gen_brownian(fine, {16, i, 0});
    for (int r = 0; r < 2; ++r) {
      const Path p = r ? b : b.subsampled(16);
      const SigmaTriple t = sigma_example_triple(p, SigmaExample::abs);
      const SigmaTriple back = sigma_compose(sigma_martingale(t.submartingale, t.increasing_part));
      ex[r].push_back(sup_dist(back.submartingale, t.submartingale));
      ea[r].push_back(sup_dist(back.increasing_part, t.increasing_part));
    }
  }
  CHECK(median(ex[1]) < median(ex[0]));
  CHECK(median(ea[1]) < median(ea[0]));
}

TEST_CASE("sigma identity: sigma_martingale(sigma_compose(M)) = M") {
  const TimeGrid g(1.0, 2000);
  for (std::uint32_t i = 0; i < 20; ++i) {
    const Path m = gen_exp_martingale(g, {17, i, 0});
    const SigmaTriple t = sigma_compose(m);
    const Path back = sigma_martingale(t.submartingale, t.increasing_part);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(std::abs(back[j] - m[j]) <= 1e-12 * std::max(1.0, m[j]));
  }
}

TEST_CASE("zero sets: X <= eps exactly where M <= (1 + eps) I; C - 1/M >= 0") {
  const TimeGrid g(1.0, 4096);
  for (std::uint32_t i = 0; i < 20; ++i) {
    const Path m = gen_exp_martingale(g, {18, i, 0});
    const SigmaTriple t = sigma_compose(m);
    const Path inf = running_extremum(m, Extremum::min);
    for (double eps : {0.01, 0.1}) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        CHECK((t.submartingale[j] <= eps) == (m[j] <= (1 + eps) * inf[j]));
      }
    }
    for (std::size_t j = 0; j < g.size(); ++j) {
      CHECK(1.0 / inf[j] - 1.0 / m[j] >= 0.0);
      if (j && inf[j] < inf[j - 1]) CHECK(t.submartingale[j] == 0.0);
    }
  }
}

TEST_CASE("carried_by_zeros examples") {
  const TimeGrid g(1.0, std::size_t{1} << 14);
  const double eps = 2.0 * std::sqrt(g.dt());
  const Path b = gen_brownian(g, {19, 0, 0});
  const SigmaTriple t = sigma_example_triple(b, SigmaExample::abs);
  const CarriedVerdict none = carried_by_zeros(t.submartingale, Path::constant(g, 0.0), eps);
  CHECK(none.score == 0.0);
  CHECK(none.carried);
  const CarriedVerdict tanaka = carried_by_zeros(t.submartingale, t.increasing_part, eps);
  CHECK(tanaka.carried);
  CHECK(tanaka.score <= kCarriedThreshold);
  const CarriedVerdict lebesgue = carried_by_zeros(t.submartingale, Path(g, g.times()), eps);
  CHECK_FALSE(lebesgue.carried);
  CHECK(lebesgue.score > 0.8);
  CHECK_THROWS_AS(carried_by_zeros(t.submartingale, t.increasing_part, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(carried_by_zeros(make({0, 0, 0}), make({0, 1, 0.5}), 0.1), std::invalid_argument);
}

TEST_CASE("minimality_gap examples") {
  const TimeGrid g(1.0, 3000);
  const Path m = gen_exp_martingale(g, {20, 0, 0});
  const Path inf = running_extremum(m, Extremum::min);
  std::vector<double> c(g.size()), inflated(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    c[j] = 1.0 / inf[j];
    inflated[j] = c[j] * (1.0 + g.time(j));
  }
  CHECK(minimality_gap(m, Path(g, c)) == 0.0);
  // Strict inflation: the gap is attained at t = 0, where every C is 1;
  // after that Y - Y* is strictly positive.
  CHECK(minimality_gap(m, Path(g, inflated)) == 0.0);
  const Path y = mult_compose(m, Path(g, inflated));
  for (std::size_t j = 1; j < g.size(); ++j) CHECK(y[j] - (m[j] / inf[j] - 1.0) > 0.0);
  CHECK_THROWS_AS(minimality_gap(m, Path::constant(g, 0.5)), std::invalid_argument);
}

TEST_CASE("class_d_diagnostics: constant and decaying streams") {
  const TimeGrid g(2.0, 4096);
  const std::vector<Path> ones(3, Path::constant(g, 1.0));
  const ClassDReport r = class_d_diagnostics(ones);
  CHECK(r.e_mc.mean == 1.0);
  CHECK(r.e_int.mean == 1.0);
  CHECK(r.e_log_inv_i.mean == 0.0);
  CHECK(r.e_qv_u.mean == 0.0);

  double prev_qv = 1.0;
  for (std::size_t n : {256, 1024, 4096}) {
    const TimeGrid h(2.0, n);
    std::vector<double> v(h.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::exp(-h.time(j));
    const ClassDSample s = class_d_sample(Path(h, v));
    CHECK(s.log_inv_i == Approx(2.0));
    CHECK(s.qv_u < prev_qv);
    prev_qv = s.qv_u;
  }
  CHECK(prev_qv < 1e-3);
  CHECK_THROWS_AS(class_d_diagnostics(std::vector<Path>{}), std::invalid_argument);
  CHECK_THROWS_AS(class_d_sample(make({1, -1})), std::invalid_argument);
}

TEST_CASE("class_d_diagnostics: pathwise log identities refine") {
  std::vector<double> le[2], ie[2];
  const TimeGrid fine(1.0, std::size_t{1} << 14);
  for (std::uint32_t i = 0; i < 40; ++i) {
    const Path m = gen_exp_martingale(fine, {21, i, 0});
    for (int r = 0; r < 2; ++r) {
      const ClassDSample s = class_d_sample(r ? m : m.subsampled(16));
      le[r].push_back(s.log_identity_err);
      ie[r].push_back(s.inf_identity_err);
    }
  }
  CHECK(median(le[1]) < median(le[0]));
  CHECK(median(ie[1]) < median(ie[0]));
}

TEST_CASE("class-(D) balance for exp(B - t/2) stopped at T_1, horizon 4") {
  const GeneratorSpec spec{Family::exp_martingale, {{"a", 1.0}}, TimeGrid(4.0, 1024)};
  const Ensemble e = make_ensemble(spec, 2024, 100000);
  const ClassDReport r = class_d_diagnostics(e.paths);
  CHECK(std::abs(r.e_mc.mean - r.e_int.mean) <= 3.0 * combined_std_error(r.e_mc, r.e_int));
  CHECK(r.n_paths == 100000);
  CHECK(r.e_mc.n_samples == r.e_qv_u.n_samples);

  const auto j = nlohmann::json::parse(to_json(r));
  for (const char* k : {"horizon", "n_paths", "e_mc", "e_int", "e_log_inv_i", "e_qv_u",
                        "pathwise_log_identity_median_err"}) {
    CHECK(j.contains(k));
  }
  CHECK(j["e_mc"].contains("stderr"));
  CHECK(j["schema"] == 1);
}
