#pragma once

// Named verification suites: exact property sweeps and seed-pinned Monte
// Carlo checks against closed-form values. Each suite reports its metrics
// and a pass/fail verdict at fixed thresholds.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace sigma {

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  unsigned workers = 0;
  /// Overrides the suite's default ensemble or trial count when nonzero.
  std::size_t n_paths = 0;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  std::string detail;
  double seconds = 0.0;
};

SuiteResult verify_skorokhod(const VerifyOptions& opt);        // 1e3 random and adversarial inputs
SuiteResult verify_minimality(const VerifyOptions& opt);       // 1e3 admissible (M, C) pairs
SuiteResult verify_sigma_roundtrip(const VerifyOptions& opt);  // 1e3 positive paths
SuiteResult verify_zero_sets(const VerifyOptions& opt);
SuiteResult verify_local_time(const VerifyOptions& opt);       // 100 paths, n = 2^14 vs 2^16
SuiteResult verify_lemma_balance(const VerifyOptions& opt);    // 1e5 paths per shipped spec
SuiteResult verify_azema(const VerifyOptions& opt);            // 1e5 paths, Bessel(3)
SuiteResult verify_gamblers_ruin(const VerifyOptions& opt);    // 1e5 resolved paths per level
SuiteResult verify_heavy_tail(const VerifyOptions& opt);       // 1e5 paths
SuiteResult verify_two_infinity(const VerifyOptions& opt);     // 2000 paths
SuiteResult verify_carried_by_zeros(const VerifyOptions& opt); // 100 paths, n = 2^14
SuiteResult verify_determinism(const VerifyOptions& opt);

struct SuiteEntry {
  std::string name;
  std::string description;
  std::function<SuiteResult(const VerifyOptions&)> run;
};

const std::vector<SuiteEntry>& verification_suites();
const SuiteEntry* find_suite(const std::string& name);

nlohmann::ordered_json to_json_value(const SuiteResult& r);

}  // namespace sigma
