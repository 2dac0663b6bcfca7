#pragma once

#include "osclab/config.hpp"

#include <string>
#include <vector>

namespace osclab {

struct CheckResult {
  std::string name;
  bool passed;
  double observed;
  double threshold;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::vector<CheckResult> checks;
  bool passed() const;
};

struct SuitesReport {
  std::vector<SuiteResult> suites;
  /// Deterministic JSON summary: version, module versions, config hash, config and all checks.
  std::string json;
  bool passed() const;
  /// Names of every failing check.
  std::vector<std::string> violations() const;
};

/// Names accepted in SuiteConfig::suites, in execution order.
const std::vector<std::string>& suite_names();

/// Runs the property suites. Each suite draws from its own generator seeded by (seed, suite
/// name), so results do not depend on which other suites run.
SuitesReport run_suites(const SuiteConfig& config);

}  // namespace osclab
