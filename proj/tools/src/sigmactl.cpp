#include "sigmactl.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sigma/decompositions.hpp"
#include "sigma/experiments.hpp"
#include "sigma/generators.hpp"
#include "sigma/parallel.hpp"
#include "sigma/path_calculus.hpp"
#include "sigma/random_sources.hpp"
#include "sigma/verification.hpp"

namespace sigma::cli {

namespace {

namespace fs = std::filesystem;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr std::uint64_t kDefaultSeed = 20240611;

// Values as given on the command line; unset fields fall back to the
// config file, then SIGMA_SEED (seed only), then defaults.
struct Settings {
  std::optional<std::string> config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::optional<std::size_t> n_steps;
  std::optional<double> horizon;
  std::optional<std::string> family;
  std::optional<std::string> out;
  std::optional<std::string> formats;
  std::optional<unsigned> workers;
  std::map<std::string, double> params;
  std::vector<std::string> targets;  // experiment name or suite names
  std::optional<std::string> input;
  std::optional<std::string> example;
};

const std::vector<std::string> kParamKeys = {"x0", "a", "b", "y", "t", "normalized"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v{};
  in >> v;
  if (!in || !(in >> std::ws).eof()) throw ConfigError("invalid value for " + key + ": '" + text + "'");
  return v;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void merge_config(Settings& s, const std::map<std::string, std::string>& kv, const std::string& command) {
  for (const auto& [key, value] : kv) {
    if (key == "command") {
      if (value != command) throw ConfigError("config file is for command '" + value + "', not '" + command + "'");
    } else if (key == "seed") {
      if (!s.seed) s.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "paths" || key == "n_paths") {
      if (!s.paths) s.paths = parse_number<std::size_t>(key, value);
    } else if (key == "n_steps") {
      if (!s.n_steps) s.n_steps = parse_number<std::size_t>(key, value);
    } else if (key == "horizon") {
      if (!s.horizon) s.horizon = parse_number<double>(key, value);
    } else if (key == "family") {
      if (!s.family) s.family = value;
    } else if (key == "out" || key == "output_dir") {
      if (!s.out) s.out = value;
    } else if (key == "formats") {
      if (!s.formats) s.formats = value;
    } else if (key == "workers") {
      if (!s.workers) s.workers = parse_number<unsigned>(key, value);
    } else if (key == "experiment" || key == "suite") {
      if (s.targets.empty()) s.targets.push_back(value);
    } else if (std::find(kParamKeys.begin(), kParamKeys.end(), key) != kParamKeys.end()) {
      if (!s.params.count(key)) s.params[key] = parse_number<double>(key, value);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

// Fully resolved run configuration.
struct RunConfig {
  std::string command;
  std::uint64_t seed = kDefaultSeed;
  std::size_t n_paths = 0;
  std::optional<std::size_t> n_steps;
  std::optional<double> horizon;
  std::optional<std::string> family;
  fs::path output_dir = "sigma_out";
  std::vector<Format> formats;
  unsigned workers = 0;
  std::map<std::string, double> params;
};

std::vector<Format> parse_formats(const std::string& text) {
  std::vector<Format> f;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    if (tok == "csv") f.push_back(Format::csv);
    else if (tok == "json") f.push_back(Format::json);
    else if (tok == "svg") f.push_back(Format::svg);
    else throw ConfigError("unknown format '" + tok + "' (expected csv, json, svg)");
  }
  if (f.empty()) throw ConfigError("empty format list");
  return f;
}

RunConfig resolve(Settings& s, const std::string& command, std::size_t default_paths, const char* default_formats) {
  if (s.config_file) merge_config(s, read_config_file(*s.config_file), command);
  RunConfig c;
  c.command = command;
  if (s.seed) {
    c.seed = *s.seed;
  } else if (const char* env = std::getenv("SIGMA_SEED"); env && *env) {
    c.seed = parse_number<std::uint64_t>("SIGMA_SEED", env);
  }
  c.n_paths = s.paths.value_or(default_paths);
  if (s.paths && *s.paths == 0) throw ConfigError("--paths must be positive");
  if (s.n_steps && *s.n_steps == 0) throw ConfigError("--n-steps must be positive");
  if (s.horizon && !(*s.horizon > 0.0)) throw ConfigError("--horizon must be positive");
  c.n_steps = s.n_steps;
  c.horizon = s.horizon;
  c.family = s.family;
  if (s.out) c.output_dir = *s.out;
  c.formats = parse_formats(s.formats.value_or(default_formats));
  c.workers = s.workers.value_or(0);
  c.params = s.params;
  return c;
}

void prepare_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw OutputError("cannot create output directory " + dir.string());
  const fs::path probe = dir / ".sigmactl_write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw OutputError("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!(f << text)) throw OutputError("failed writing " + path.string());
}

// Timestamps live only here, so reports stay byte-comparable.
void write_metadata(const RunConfig& c, const std::vector<std::string>& artifacts) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["created_utc"] = stamp;
  j["command"] = c.command;
  j["seed"] = c.seed;
  j["workers"] = resolve_workers(c.workers);
  j["gaussian_transform"] = kGaussianTransform;
  j["artifacts"] = artifacts;
  write_text(c.output_dir / "metadata.json", j.dump(2) + "\n");
}

bool wants(const RunConfig& c, Format f) {
  return std::find(c.formats.begin(), c.formats.end(), f) != c.formats.end();
}

GeneratorSpec make_spec(const RunConfig& c) {
  std::map<std::string, std::string> kv;
  kv["family"] = c.family.value_or("brownian");
  if (c.horizon) kv["horizon"] = std::to_string(*c.horizon);
  if (c.n_steps) kv["n_steps"] = std::to_string(*c.n_steps);
  for (const auto& [k, v] : c.params) {
    if (k == "y" || k == "t") throw ConfigError("parameter --" + k + " applies to experiments only");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    kv[k] = buf;
  }
  try {
    GeneratorSpec spec = spec_from_kv(kv);
    spec.validate();
    return spec;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  const GeneratorSpec spec = make_spec(c);
  prepare_output_dir(c.output_dir);
  const Ensemble ens = make_ensemble(spec, c.seed, c.n_paths, c.workers);
  std::vector<std::string> artifacts;
  if (wants(c, Format::csv)) {
    std::ostringstream csv;
    write_paths_csv(csv, ens.paths);
    write_text(c.output_dir / "paths.csv", csv.str());
    artifacts.push_back("paths.csv");
  }
  if (wants(c, Format::json)) {
    nlohmann::ordered_json j;
    j["schema"] = kReportSchema;
    j["command"] = "simulate";
    j["spec"] = to_kv(spec);
    j["seed"] = c.seed;
    j["n_paths"] = c.n_paths;
    j["horizon"] = spec.grid.horizon();
    std::vector<double> ends;
    for (const Path& p : ens.paths) ends.push_back(p.back());
    j["terminal_mean"] = ends.size() >= 2 ? estimate(ends).mean : ends.front();
    write_text(c.output_dir / "simulate.json", j.dump(2) + "\n");
    artifacts.push_back("simulate.json");
  }
  write_metadata(c, artifacts);
  out << "simulate " << to_string(spec.family) << ": " << c.n_paths << " paths x " << spec.grid.size()
      << " points -> " << c.output_dir.string() << "\n";
  return kOk;
}

int cmd_decompose(const RunConfig& c, const Settings& s, std::ostream& out) {
  std::vector<Path> paths;
  std::string source;
  if (s.input) {
    std::ifstream in(*s.input);
    if (!in) throw ConfigError("cannot read input " + *s.input);
    try {
      paths = read_paths_csv(in);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    source = *s.input;
  } else {
    const GeneratorSpec spec = make_spec(c);
    paths = make_ensemble(spec, c.seed, c.n_paths, c.workers).paths;
    source = std::string(to_string(spec.family));
  }
  const std::string example = s.example.value_or("auto");
  if (example != "auto" && example != "abs" && example != "pos_part" && example != "drawdown" &&
      example != "martingale") {
    throw ConfigError("unknown --example '" + example + "' (auto, abs, pos_part, drawdown, martingale)");
  }
  prepare_output_dir(c.output_dir);
  std::ostringstream csv;
  csv << "path_id,t,X,N,A,M\n";
  std::vector<double> scores;
  std::size_t carried = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const Path& k = paths[i];
    std::string kind = example;
    if (kind == "auto") kind = (k[0] == 1.0 && std::all_of(k.values().begin(), k.values().end(),
                                                            [](double v) { return v > 0.0; }))
                                   ? "martingale"
                                   : "abs";
    std::optional<SigmaTriple> tri;
    try {
      tri = kind == "martingale" ? sigma_compose(k)
                                 : sigma_example_triple(k, kind == "abs"        ? SigmaExample::abs
                                                           : kind == "pos_part" ? SigmaExample::pos_part
                                                                                : SigmaExample::drawdown);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("path " + std::to_string(i) + ": " + e.what());
    }
    const Path m = sigma_martingale(tri->submartingale, tri->increasing_part);
    const CarriedVerdict v = carried_by_zeros(tri->submartingale, tri->increasing_part, tri->zero_threshold);
    scores.push_back(v.score);
    carried += v.carried;
    char buf[160];
    for (std::size_t j = 0; j < k.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", i, k.grid().time(j),
                    tri->submartingale[j], tri->martingale_part[j], tri->increasing_part[j], m[j]);
      csv << buf;
    }
  }
  std::vector<std::string> artifacts;
  if (wants(c, Format::csv)) {
    write_text(c.output_dir / "decomposition.csv", csv.str());
    artifacts.push_back("decomposition.csv");
  }
  if (wants(c, Format::json)) {
    nlohmann::ordered_json j;
    j["schema"] = kReportSchema;
    j["command"] = "decompose";
    j["source"] = source;
    j["seed"] = c.seed;
    j["n_paths"] = paths.size();
    j["carried_by_zeros"] = {{"carried", carried}, {"max_score", *std::max_element(scores.begin(), scores.end())}};
    write_text(c.output_dir / "decompose.json", j.dump(2) + "\n");
    artifacts.push_back("decompose.json");
  }
  write_metadata(c, artifacts);
  out << "decompose " << source << ": " << paths.size() << " paths, carried by zeros on " << carried << "/"
      << paths.size() << "\n";
  return kOk;
}

int cmd_experiment(const RunConfig& c, const std::string& name, std::ostream& out) {
  const ExperimentEntry* e = find_experiment(name);
  if (!e) throw ConfigError("unknown experiment '" + name + "'");
  ExperimentConfig ec;
  ec.run = {c.seed, c.n_paths, c.workers};
  ec.family = c.family;
  ec.horizon = c.horizon;
  ec.n_steps = c.n_steps;
  ec.params = c.params;
  prepare_output_dir(c.output_dir);
  ExperimentReport report;
  try {
    report = e->run(ec);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  } catch (const std::domain_error& ex) {
    throw ConfigError(ex.what());
  }
  std::vector<std::string> artifacts;
  try {
    for (const auto& p : write_report(report, c.output_dir, c.formats)) artifacts.push_back(p.filename().string());
  } catch (const std::exception& ex) {
    throw OutputError(ex.what());
  }
  write_metadata(c, artifacts);
  out << report.summary << "\n";
  return kOk;
}

int cmd_verify(const RunConfig& c, const Settings& s, std::ostream& out) {
  std::vector<const SuiteEntry*> suites;
  if (s.targets.empty() || (s.targets.size() == 1 && s.targets[0] == "all")) {
    for (const auto& e : verification_suites()) suites.push_back(&e);
  } else {
    for (const auto& t : s.targets) {
      const SuiteEntry* e = find_suite(t);
      if (!e) throw ConfigError("unknown verification suite '" + t + "'");
      suites.push_back(e);
    }
  }
  const VerifyOptions opt{c.seed, c.workers, c.n_paths};
  bool all = true;
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["seed"] = c.seed;
  j["suites"] = nlohmann::ordered_json::array();
  for (const SuiteEntry* e : suites) {
    const SuiteResult r = e->run(opt);
    all = all && r.passed;
    j["suites"].push_back(to_json_value(r));
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
  }
  j["passed"] = all;
  if (s.out) {
    prepare_output_dir(c.output_dir);
    write_text(c.output_dir / "verify.json", j.dump(2) + "\n");
    write_metadata(c, {"verify.json"});
  }
  return all ? kOk : kAcceptanceFailure;
}

std::string experiment_list() {
  std::string s = "Experiments:\n";
  for (const auto& e : experiment_registry()) s += "  " + e.name + "  " + e.description + "\n";
  s += "Verification suites:\n";
  for (const auto& e : verification_suites()) s += "  " + e.name + "  " + e.description + "\n";
  return s;
}

void add_common(CLI::App* sub, Settings& s) {
  sub->add_option("--config", s.config_file, "key = value config file; flags override it");
  sub->add_option("--seed", s.seed, "master seed (default: SIGMA_SEED, then 20240611)");
  sub->add_option("--paths", s.paths, "number of paths");
  sub->add_option("--n-steps", s.n_steps, "grid steps");
  sub->add_option("--horizon", s.horizon, "time horizon");
  sub->add_option("--family", s.family, "generator family");
  sub->add_option("--out", s.out, "output directory");
  sub->add_option("--formats", s.formats, "comma-separated subset of csv,json,svg");
  sub->add_option("--workers", s.workers, "worker threads (0: available parallelism)");
  for (const auto& k : kParamKeys) {
    sub->add_option_function<double>("--" + k, [&s, k](double v) { s.params[k] = v; }, "parameter " + k);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"sigmactl: multiplicative decompositions and class-(Sigma) experiments", "sigmactl"};
  app.require_subcommand(1);
  app.footer(experiment_list());
  Settings s;
  auto* simulate = app.add_subcommand("simulate", "generate a path ensemble");
  auto* decompose = app.add_subcommand("decompose", "class-(Sigma) decomposition of generated or CSV paths");
  auto* verify = app.add_subcommand("verify", "run verification suites (exit 3 on failure)");
  auto* experiment = app.add_subcommand("experiment", "run a registered experiment");
  for (auto* sub : {simulate, decompose, verify, experiment}) add_common(sub, s);
  decompose->add_option("--input", s.input, "CSV of paths (path_id,t,value)");
  decompose->add_option("--example", s.example, "auto, abs, pos_part, drawdown or martingale");
  verify->add_option("suites", s.targets, "suite names, or all");
  experiment->add_option("name", s.targets, "experiment name")->expected(0, 1);
  experiment->footer(experiment_list());

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kInvalidConfig;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(resolve(s, "simulate", 10, "csv"), out);
    if (decompose->parsed()) return cmd_decompose(resolve(s, "decompose", 10, "csv,json"), s, out);
    if (experiment->parsed()) {
      const RunConfig c = resolve(s, "experiment", 1000, "csv,json,svg");
      if (s.targets.size() != 1) throw ConfigError("experiment needs exactly one name");
      return cmd_experiment(c, s.targets[0], out);
    }
    if (verify->parsed()) return cmd_verify(resolve(s, "verify", 0, "json"), s, out);
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const OutputError& e) {
    err << "output error: " << e.what() << "\n";
    return kUnwritableOutput;
  } catch (const std::invalid_argument& e) {
    err << "invalid config: " << e.what() << "\n";
    return kInvalidConfig;
  }
  return kInvalidConfig;
}

}  // namespace sigma::cli
