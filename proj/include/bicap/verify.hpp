#pragma once

// Verification suites: each runs a fixed battery of numerical checks with
// pinned tolerances and reports every measured value.

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace bicap {

struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  std::string relation;  // "<=", ">=", "in", "=="
  bool pass = false;
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;
  nlohmann::json data = nlohmann::json::object();
  double seconds = 0.0;

  bool passed() const;
  /// Throws std::logic_error naming a check that does not exist.
  const Check& check(const std::string& name) const;
};

struct VerifyOptions {
  std::uint64_t seed = 1;  // random profiles and blob domains
};

/// kernel, identity, capacity, spectral, green, punctured, cusp,
/// fourpoint, decay.
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite.
SuiteResult run_suite(const std::string& name, const VerifyOptions& opts = {});

nlohmann::json to_json(const SuiteResult& r);

}  // namespace bicap
