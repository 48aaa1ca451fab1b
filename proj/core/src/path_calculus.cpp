#include "sigma/path_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sigma {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : -1.0; }

}  // namespace

double default_zero_threshold(const TimeGrid& grid) { return 2.0 * std::sqrt(grid.dt()); }

Path running_extremum(const Path& path, Extremum mode) {
  const auto v = path.values();
  std::vector<double> out(v.begin(), v.end());
  for (std::size_t i = 1; i < out.size(); ++i) {
    out[i] = mode == Extremum::min ? std::min(out[i - 1], v[i]) : std::max(out[i - 1], v[i]);
  }
  return Path(path.grid(), std::move(out), (mode == Extremum::min ? "inf " : "sup ") + path.label());
}

Path ito_integral(const Path& integrand, const Path& integrator) {
  require_same_grid(integrand, integrator, "ito_integral");
  const auto h = integrand.values();
  const auto x = integrator.values();
  std::vector<double> s(x.size());
  s[0] = 0.0;
  for (std::size_t j = 0; j + 1 < x.size(); ++j) s[j + 1] = s[j] + h[j] * (x[j + 1] - x[j]);
  return Path(integrator.grid(), std::move(s), "int " + integrand.label() + " d" + integrator.label());
}

Path quadratic_variation(const Path& x) {
  const auto v = x.values();
  std::vector<double> q(v.size());
  q[0] = 0.0;
  for (std::size_t j = 0; j + 1 < v.size(); ++j) {
    const double d = v[j + 1] - v[j];
    q[j + 1] = q[j] + d * d;
  }
  return Path(x.grid(), std::move(q), "<" + x.label() + ">");
}

ReflectionPair skorokhod_map(const Path& z) {
  if (z[0] != 0.0) throw std::invalid_argument("skorokhod_map: z_0 must be 0");
  const auto v = z.values();
  std::vector<double> k(v.size()), y(v.size());
  double reg = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    // Where -z_j sets a new maximum, y_j = z_j + (-z_j) is exactly zero.
    if (-v[j] > reg) reg = -v[j];
    k[j] = reg;
    y[j] = v[j] + reg;
  }
  return {Path(z.grid(), std::move(y), "y"), Path(z.grid(), std::move(k), "k")};
}

TanakaLocalTime local_time_tanaka_detailed(const Path& path) {
  const auto k = path.values();
  std::vector<double> raw(k.size()), clamped(k.size());
  double integral = 0.0;
  raw[0] = clamped[0] = 0.0;
  for (std::size_t j = 0; j + 1 < k.size(); ++j) {
    integral += sgn(k[j]) * (k[j + 1] - k[j]);
    raw[j + 1] = std::abs(k[j + 1]) - std::abs(k[0]) - integral;
    clamped[j + 1] = std::max(clamped[j], raw[j + 1]);
  }
  return {Path(path.grid(), std::move(clamped), "L"), Path(path.grid(), std::move(raw), "L raw")};
}

Path local_time_tanaka(const Path& k) { return local_time_tanaka_detailed(k).clamped; }

Path local_time_occupation(const Path& path, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("local_time_occupation: epsilon must be positive");
  const auto k = path.values();
  const double w = path.grid().dt() / (2.0 * epsilon);
  std::vector<double> l(k.size());
  l[0] = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j + 1 < k.size(); ++j) {
    if (std::abs(k[j]) < epsilon) ++count;
    l[j + 1] = static_cast<double>(count) * w;
  }
  return Path(path.grid(), std::move(l), "L occupation");
}

LocalTimeEstimate local_time(const Path& k, double epsilon) {
  if (!(epsilon > 0.0)) epsilon = std::sqrt(k.grid().dt());
  return {local_time_tanaka(k), local_time_occupation(k, epsilon), epsilon};
}

SigmaTriple sigma_example_triple(const Path& path, SigmaExample kind) {
  if (path[0] != 0.0) throw std::invalid_argument("sigma_example_triple: K_0 must be 0");
  const auto k = path.values();
  const std::size_t n = k.size();
  std::vector<double> x(n), a(n), nm(n);
  switch (kind) {
    case SigmaExample::abs: {
      const Path l = local_time_tanaka(path);
      for (std::size_t j = 0; j < n; ++j) {
        x[j] = std::abs(k[j]);
        a[j] = l[j];
      }
      break;
    }
    case SigmaExample::pos_part: {
      const Path l = local_time_tanaka(path);
      for (std::size_t j = 0; j < n; ++j) {
        x[j] = std::max(k[j], 0.0);
        a[j] = 0.5 * l[j];
      }
      break;
    }
    case SigmaExample::drawdown: {
      double sup = k[0];
      for (std::size_t j = 0; j < n; ++j) {
        sup = std::max(sup, k[j]);
        x[j] = sup - k[j];
        a[j] = sup;
      }
      break;
    }
  }
  for (std::size_t j = 0; j < n; ++j) nm[j] = x[j] - a[j];
  const TimeGrid& g = path.grid();
  return {Path(g, std::move(x), "X"), Path(g, std::move(nm), "N"), Path(g, std::move(a), "A"),
          default_zero_threshold(g)};
}

}  // namespace sigma
