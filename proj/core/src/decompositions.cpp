#include "sigma/decompositions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sigma/path_calculus.hpp"
#include "sigma/report.hpp"

namespace sigma {

namespace {

constexpr double kFloor = 1e-12;

[[noreturn]] void fail(const std::string& op, const std::string& what, std::size_t index) {
  throw std::invalid_argument(op + ": " + what + " (first offending index " +
                              std::to_string(index) + ")");
}

void require_positive_start_one(const std::string& op, const Path& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!(m[i] > 0.0)) fail(op, "M must be strictly positive", i);
  }
  if (std::abs(m[0] - 1.0) > kFloor) fail(op, "M_0 must be 1", 0);
}

void require_nondecreasing(const std::string& op, const Path& p, const std::string& name) {
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] < p[i - 1]) fail(op, name + " must be nondecreasing", i);
  }
}

void require_admissible(const std::string& op, const Path& m, const Path& c) {
  require_same_grid(m, c, op.c_str());
  require_positive_start_one(op, m);
  if (std::abs(c[0] - 1.0) > kFloor) fail(op, "C_0 must be 1", 0);
  require_nondecreasing(op, c, "C");
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] * c[i] < 1.0 - kFloor) fail(op, "M C must be at least 1", i);
  }
}

}  // namespace

Path mult_compose(const Path& m, const Path& c) {
  require_admissible("mult_compose", m, c);
  std::vector<double> y(m.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = m[i] * c[i] - 1.0;
  y[0] = 0.0;
  return Path(m.grid(), std::move(y), "Y");
}

MultDecomp mult_decompose(const Path& y, const Path& ell, StepWeight weight) {
  require_same_grid(y, ell, "mult_decompose");
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < -kFloor) fail("mult_decompose", "Y must be nonnegative", i);
  }
  if (std::abs(y[0]) > kFloor) fail("mult_decompose", "Y_0 must be 0", 0);
  if (std::abs(ell[0]) > kFloor) fail("mult_decompose", "ell_0 must be 0", 0);
  require_nondecreasing("mult_decompose", ell, "ell");

  const std::size_t n = y.size();
  std::vector<double> c(n), m(n);
  double log_c = 0.0;
  c[0] = 1.0;
  m[0] = 1.0 + y[0];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double level = weight == StepWeight::left ? y[i] : 0.5 * (y[i] + y[i + 1]);
    log_c += (ell[i + 1] - ell[i]) / (1.0 + level);
    c[i + 1] = std::exp(log_c);
    m[i + 1] = (1.0 + y[i + 1]) / c[i + 1];
  }
  return {Path(y.grid(), std::move(m), "M"), Path(y.grid(), std::move(c), "C"), y};
}

Path mult_decompose_exp(const Path& m, const Path& y) {
  require_same_grid(m, y, "mult_decompose_exp");
  if (std::abs(m[0]) > kFloor) fail("mult_decompose_exp", "m_0 must be 0", 0);
  std::vector<double> out(m.size());
  double drift = 0.0;
  double quad = 0.0;
  out[0] = 1.0;
  for (std::size_t i = 0; i + 1 < m.size(); ++i) {
    const double dm = (m[i + 1] - m[i]) / (1.0 + y[i]);
    drift += dm;
    quad += dm * dm;
    out[i + 1] = std::exp(drift - 0.5 * quad);
  }
  return Path(m.grid(), std::move(out), "M (exponential form)");
}

SigmaTriple sigma_compose(const Path& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!(m[i] > 0.0)) fail("sigma_compose", "M must be strictly positive", i);
  }
  if (std::abs(m[0] - 1.0) > kFloor) fail("sigma_compose", "M_0 must be 1", 0);
  const Path inf = running_extremum(m, Extremum::min);
  const std::size_t n = m.size();
  std::vector<double> x(n), a(n), nm(n);
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = m[j] / inf[j] - 1.0;
    a[j] = -std::log(inf[j]);
    nm[j] = x[j] - a[j];
  }
  const TimeGrid& g = m.grid();
  return {Path(g, std::move(x), "X"), Path(g, std::move(nm), "N"), Path(g, std::move(a), "A"),
          default_zero_threshold(g)};
}

double sigma_integral_gap(const SigmaTriple& triple, const Path& m) {
  const Path inf = running_extremum(m, Extremum::min);
  std::vector<double> inv(inf.size());
  for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / inf[i];
  const Path integral = ito_integral(Path(m.grid(), std::move(inv)), m);
  double gap = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    gap = std::max(gap, std::abs(triple.martingale_part[i] - integral[i]));
  }
  return gap;
}

Path sigma_martingale(const Path& x, const Path& a) {
  require_same_grid(x, a, "sigma_martingale");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < -kFloor) fail("sigma_martingale", "X must be nonnegative", i);
  }
  if (std::abs(x[0]) > kFloor) fail("sigma_martingale", "X_0 must be 0", 0);
  if (std::abs(a[0]) > kFloor) fail("sigma_martingale", "A_0 must be 0", 0);
  require_nondecreasing("sigma_martingale", a, "A");
  std::vector<double> m(x.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = (1.0 + x[i]) * std::exp(-a[i]);
  return Path(x.grid(), std::move(m), "M");
}

CarriedVerdict carried_by_zeros(const Path& x, const Path& a, double epsilon, double threshold) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("carried_by_zeros: epsilon must be positive");
  require_same_grid(x, a, "carried_by_zeros");
  require_nondecreasing("carried_by_zeros", a, "A");
  double off = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (std::min(x[i], x[i + 1]) > epsilon) off += a[i + 1] - a[i];
  }
  const double total = std::max(a[a.size() - 1] - a[0], std::numeric_limits<double>::min());
  const double score = off / total;
  return {score, score <= threshold};
}

double minimality_gap(const Path& m, const Path& c) {
  require_admissible("minimality_gap", m, c);
  double inf = m[0];
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m.size(); ++j) {
    inf = std::min(inf, m[j]);
    gap = std::min(gap, m[j] * (c[j] - 1.0 / inf));
  }
  return gap;
}

ClassDSample class_d_sample(const Path& m) {
  require_positive_start_one("class_d_sample", m);
  const std::size_t n = m.size();
  ClassDSample s;
  double inf = m[0];
  double c = 1.0;
  double sum_post = 0.0;
  double sum_left = 0.0;
  double u = 0.0;
  double qv = 0.0;
  double min_exponent = 0.0;
  double log_err = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double du = (m[i + 1] - m[i]) / m[i];
    u += du;
    qv += du * du;
    const double next_inf = std::min(inf, m[i + 1]);
    const double next_c = 1.0 / next_inf;
    sum_post += m[i + 1] * (next_c - c);
    sum_left += m[i] * (next_c - c);
    inf = next_inf;
    c = next_c;
    const double exponent = u - 0.5 * qv;
    min_exponent = std::min(min_exponent, exponent);
    log_err = std::max(log_err, std::abs(-std::log(m[i + 1]) + exponent));
  }
  s.m_c = m[n - 1] * c;
  s.int_m_dc = 1.0 + sum_post;
  s.int_m_dc_left = 1.0 + sum_left;
  s.log_inv_i = -std::log(inf);
  s.qv_u = qv;
  s.log_identity_err = log_err;
  s.inf_identity_err = std::abs(s.log_inv_i + min_exponent);
  s.m_t = m[n - 1];
  return s;
}

ClassDReport summarize_class_d(std::span<const ClassDSample> samples, double horizon) {
  if (samples.empty()) throw std::invalid_argument("class_d_diagnostics: empty ensemble");
  const std::size_t n = samples.size();
  std::vector<double> mc(n), in(n), li(n), qv(n), le(n), ie(n), mt(n), tail(n);
  for (std::size_t i = 0; i < n; ++i) {
    mc[i] = samples[i].m_c;
    in[i] = samples[i].int_m_dc;
    li[i] = samples[i].log_inv_i;
    qv[i] = samples[i].qv_u;
    le[i] = samples[i].log_identity_err;
    ie[i] = samples[i].inf_identity_err;
    mt[i] = samples[i].m_t;
    tail[i] = samples[i].m_t > 10.0 ? samples[i].m_t : 0.0;
  }
  auto est = [&](const std::vector<double>& v) {
    if (n >= 2) return estimate(v);
    return McEstimate{v[0], 0.0, 1};
  };
  ClassDReport r;
  r.e_mc = est(mc);
  r.e_int = est(in);
  r.e_log_inv_i = est(li);
  r.e_qv_u = est(qv);
  r.m_t_mean = est(mt);
  r.horizon = horizon;
  r.n_paths = n;
  r.pathwise_log_identity_median_err = median(le);
  r.pathwise_inf_identity_median_err = median(ie);
  const double total = pairwise_sum(mt);
  r.m_t_tail_mass = total > 0.0 ? pairwise_sum(tail) / total : 0.0;
  return r;
}

ClassDReport class_d_diagnostics(std::span<const Path> martingales) {
  if (martingales.empty()) throw std::invalid_argument("class_d_diagnostics: empty ensemble");
  std::vector<ClassDSample> samples;
  samples.reserve(martingales.size());
  for (const Path& m : martingales) {
    require_same_grid(m, martingales[0], "class_d_diagnostics");
    samples.push_back(class_d_sample(m));
  }
  return summarize_class_d(samples, martingales[0].grid().horizon());
}

std::string to_json(const ClassDReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["horizon"] = r.horizon;
  j["n_paths"] = r.n_paths;
  j["e_mc"] = to_json_value(r.e_mc);
  j["e_int"] = to_json_value(r.e_int);
  j["e_log_inv_i"] = to_json_value(r.e_log_inv_i);
  j["e_qv_u"] = to_json_value(r.e_qv_u);
  j["pathwise_log_identity_median_err"] = r.pathwise_log_identity_median_err;
  j["pathwise_inf_identity_median_err"] = r.pathwise_inf_identity_median_err;
  j["ui_proxies"] = {{"m_t_mean", to_json_value(r.m_t_mean)},
                     {"m_t_drift_from_m0", r.m_t_mean.mean - 1.0},
                     {"m_t_tail_mass_above_10", r.m_t_tail_mass}};
  return j.dump(2);
}

}  // namespace sigma
