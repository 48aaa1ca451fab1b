#include "sigma/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "sigma/parallel.hpp"

namespace sigma {

namespace {

constexpr std::pair<Family, std::string_view> kFamilyNames[] = {
    {Family::brownian, "brownian"},
    {Family::brownian_stopped_level, "brownian_stopped_level"},
    {Family::brownian_drift_stopped_line, "brownian_drift_stopped_line"},
    {Family::exp_martingale, "exp_martingale"},
    {Family::bessel3, "bessel3"},
    {Family::scale_martingale, "scale_martingale"},
};

void require_positive(const GeneratorSpec& spec, const std::string& name) {
  const double v = spec.param(name);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument("GeneratorSpec(" + std::string(to_string(spec.family)) +
                                "): parameter " + name + " must be positive");
  }
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::optional<HittingRule> exp_martingale_stop(const GeneratorSpec& spec) {
  if (spec.has("a")) return HittingRule::level(spec.param("a"));
  if (spec.has("b")) return HittingRule::line(spec.param("b"));
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Family family) {
  for (const auto& [f, name] : kFamilyNames) {
    if (f == family) return name;
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (const auto& [f, n] : kFamilyNames) {
    if (n == name) return f;
  }
  throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

double GeneratorSpec::param(const std::string& name) const {
  const auto it = parameters.find(name);
  if (it == parameters.end()) {
    throw std::invalid_argument("GeneratorSpec(" + std::string(to_string(family)) +
                                "): missing parameter " + name);
  }
  return it->second;
}

double GeneratorSpec::param_or(const std::string& name, double fallback) const {
  const auto it = parameters.find(name);
  return it == parameters.end() ? fallback : it->second;
}

void GeneratorSpec::validate() const {
  switch (family) {
    case Family::brownian:
      break;
    case Family::brownian_stopped_level:
      require_positive(*this, "a");
      break;
    case Family::brownian_drift_stopped_line:
      require_positive(*this, "b");
      break;
    case Family::exp_martingale:
      if (has("a") && has("b")) {
        throw std::invalid_argument("GeneratorSpec(exp_martingale): give at most one of a, b");
      }
      if (has("a")) require_positive(*this, "a");
      if (has("b")) require_positive(*this, "b");
      break;
    case Family::bessel3:
      require_positive(*this, "x0");
      break;
    case Family::scale_martingale: {
      require_positive(*this, "x0");
      const double mode = param_or("normalized", 1.0);
      if (mode != 0.0 && mode != 1.0) {
        throw std::invalid_argument("GeneratorSpec(scale_martingale): normalized must be 0 or 1");
      }
      break;
    }
  }
}

std::string to_kv(const GeneratorSpec& spec) {
  std::ostringstream out;
  out << "family = " << to_string(spec.family) << '\n';
  out << "horizon = " << format_number(spec.grid.horizon()) << '\n';
  out << "n_steps = " << spec.grid.n_steps() << '\n';
  for (const auto& [k, v] : spec.parameters) out << k << " = " << format_number(v) << '\n';
  return out.str();
}

GeneratorSpec spec_from_kv(const std::map<std::string, std::string>& kv) {
  GeneratorSpec spec;
  double horizon = 1.0;
  std::size_t n_steps = 1024;
  for (const auto& [key, value] : kv) {
    try {
      if (key == "family") {
        spec.family = parse_family(value);
      } else if (key == "horizon") {
        horizon = std::stod(value);
      } else if (key == "n_steps") {
        const long long n = std::stoll(value);
        if (n <= 0) throw std::invalid_argument("n_steps must be positive");
        n_steps = static_cast<std::size_t>(n);
      } else {
        spec.parameters[key] = std::stod(value);
      }
    } catch (const std::logic_error& e) {
      throw std::invalid_argument("spec key '" + key + "': " + e.what());
    }
  }
  spec.grid = TimeGrid(horizon, n_steps);
  spec.validate();
  return spec;
}

std::string HittingRule::describe() const {
  switch (kind) {
    case Kind::level: return "first t with B_t >= " + format_number(parameter);
    case Kind::line: return "first t with B_t + " + format_number(parameter) + " t >= 1";
    case Kind::band:
      return "first exit of B_t from (" + format_number(lower) + ", " + format_number(parameter) + ")";
  }
  return {};
}

Path brownian_from_increments(const TimeGrid& grid, std::span<const double> increments,
                              std::string label) {
  if (increments.size() != grid.n_steps()) {
    throw std::invalid_argument("brownian_from_increments: need one increment per step");
  }
  std::vector<double> v(grid.size());
  v[0] = 0.0;
  for (std::size_t i = 0; i < increments.size(); ++i) v[i + 1] = v[i] + increments[i];
  return Path(grid, std::move(v), std::move(label));
}

Path gen_brownian(const TimeGrid& grid, const StreamKey& key) {
  const auto inc = gaussian_increments(grid, key);
  return brownian_from_increments(grid, inc);
}

StoppedPath gen_stopped_hitting(const Path& base, const HittingRule& rule) {
  const TimeGrid& grid = base.grid();
  return stop_path(
      base, [&](std::size_t i, double v) { return rule.hit(grid.time(i), v); }, rule.describe());
}

StoppedPath gen_brownian_until(const TimeGrid& grid, const StreamKey& key, const HittingRule& rule) {
  constexpr std::size_t kChunk = 4096;
  const GaussianStream stream(key);
  const double sd = std::sqrt(grid.dt());
  std::vector<double> v(grid.size());
  std::vector<double> z(kChunk);
  v[0] = 0.0;
  std::optional<std::size_t> stop;
  if (rule.hit(0.0, 0.0)) stop = 0;
  std::size_t i = 0;
  while (!stop && i < grid.n_steps()) {
    const std::size_t len = std::min(kChunk, grid.n_steps() - i);
    stream.fill_normal(i, std::span(z).first(len));
    for (std::size_t k = 0; k < len; ++k, ++i) {
      v[i + 1] = v[i] + sd * z[k];
      if (rule.hit(grid.time(i + 1), v[i + 1])) {
        stop = i + 1;
        break;
      }
    }
  }
  if (stop) std::fill(v.begin() + static_cast<std::ptrdiff_t>(*stop), v.end(), v[*stop]);
  return {Path(grid, std::move(v), "B"), stop, rule.describe()};
}

Path exp_martingale_from_brownian(const Path& brownian, const std::optional<HittingRule>& stop) {
  const TimeGrid& grid = brownian.grid();
  std::size_t k = grid.n_steps();
  std::string label = "exp(B - t/2)";
  if (stop) {
    const StoppedPath sp = gen_stopped_hitting(brownian, *stop);
    if (sp.stop_index) k = *sp.stop_index;
    label += " stopped at " + stop->describe();
  }
  std::vector<double> m(grid.size());
  for (std::size_t j = 0; j < m.size(); ++j) {
    const std::size_t s = std::min(j, k);
    m[j] = std::exp(brownian[s] - 0.5 * grid.time(s));
  }
  return Path(grid, std::move(m), std::move(label));
}

Path gen_exp_martingale(const TimeGrid& grid, const StreamKey& key,
                        const std::optional<HittingRule>& stop) {
  return exp_martingale_from_brownian(gen_brownian(grid, key), stop);
}

Path bessel3_from_increments(const TimeGrid& grid, double x0, std::span<const double> dx,
                             std::span<const double> dy, std::span<const double> dz) {
  if (!(x0 > 0.0)) throw std::invalid_argument("bessel3: x0 must be positive");
  const std::size_t n = grid.n_steps();
  if (dx.size() != n || dy.size() != n || dz.size() != n) {
    throw std::invalid_argument("bessel3_from_increments: need one increment per step");
  }
  std::vector<double> r(grid.size());
  double x = x0, y = 0.0, z = 0.0;
  r[0] = x0;
  for (std::size_t i = 0; i < n; ++i) {
    x += dx[i];
    y += dy[i];
    z += dz[i];
    r[i + 1] = std::sqrt(x * x + y * y + z * z);
  }
  return Path(grid, std::move(r), "R");
}

Path gen_bessel3(const TimeGrid& grid, double x0, const StreamKey& key) {
  StreamKey k = key;
  const auto dx = gaussian_increments(grid, k);
  k.substream = key.substream + 1;
  const auto dy = gaussian_increments(grid, k);
  k.substream = key.substream + 2;
  const auto dz = gaussian_increments(grid, k);
  return bessel3_from_increments(grid, x0, dx, dy, dz);
}

Path scale_martingale(const Path& bessel, ScaleMode mode) {
  const auto r = bessel.values();
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0)) {
      throw std::domain_error("scale_martingale: nonpositive R at index " + std::to_string(i));
    }
  }
  const double scale = mode == ScaleMode::normalized ? r[0] : 1.0;
  std::vector<double> m(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) m[i] = scale / r[i];
  return Path(bessel.grid(), std::move(m), mode == ScaleMode::normalized ? "x0/R" : "1/R");
}

Path generate(const GeneratorSpec& spec, const StreamKey& key) {
  spec.validate();
  switch (spec.family) {
    case Family::brownian:
      return gen_brownian(spec.grid, key);
    case Family::brownian_stopped_level:
      return gen_brownian_until(spec.grid, key, HittingRule::level(spec.param("a"))).path;
    case Family::brownian_drift_stopped_line:
      return gen_brownian_until(spec.grid, key, HittingRule::line(spec.param("b"))).path;
    case Family::exp_martingale:
      return gen_exp_martingale(spec.grid, key, exp_martingale_stop(spec));
    case Family::bessel3:
      return gen_bessel3(spec.grid, spec.param("x0"), key);
    case Family::scale_martingale: {
      const Path r = gen_bessel3(spec.grid, spec.param("x0"), key);
      return scale_martingale(
          r, spec.param_or("normalized", 1.0) != 0.0 ? ScaleMode::normalized : ScaleMode::neg_inverse);
    }
  }
  throw std::logic_error("generate: unhandled family");
}

Ensemble make_ensemble(const GeneratorSpec& spec, std::uint64_t master_seed, std::size_t n_paths,
                       unsigned workers) {
  spec.validate();
  Ensemble e{spec, {}, {}};
  e.seeds.resize(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) {
    e.seeds[i] = StreamKey{master_seed, static_cast<std::uint32_t>(i), 0};
  }
  std::vector<std::optional<Path>> slots(n_paths);
  parallel_for(n_paths, workers, [&](std::size_t i) { slots[i] = generate(spec, e.seeds[i]); });
  e.paths.reserve(n_paths);
  for (auto& p : slots) e.paths.push_back(std::move(*p));
  return e;
}

}  // namespace sigma
