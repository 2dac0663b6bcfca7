#pragma once

#include "osclab/measures.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace osclab {

inline constexpr const char* kVersion = "1.0.0";

/// Per-module versions embedded in every report.
const std::map<std::string, std::string>& module_versions();

/// Malformed input; the message names the JSON pointer of the offending value.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"dim": d, "components": [{"weight": w, "generator": [x_1..x_d, xi_1..xi_d]}, ...]}
ConvexMeasure parse_measure(const std::string& text);
ConvexMeasure load_measure(const std::string& path);
std::string measure_to_json(const ConvexMeasure& mu);

/// {"dim": d, "symbols": [{"id": "...", "terms": [{"beta": [..], "gamma": [..], "re": c, "im": c}]}]}
/// for sum c conj(w)^beta w^gamma; "im" is optional.
TestFamily parse_family(const std::string& text);
TestFamily load_family(const std::string& path);

struct Tolerances {
  double eigen = 1e-12;
  double unitarity = 1e-12;
  double covariance = 1e-9;
  double group = 1e-10;
  double quadrature = 1e-6;
  double trapezoid = 1e-12;
  double microlocal_final = 1e-3;
  double converge_final = 5e-2;
  double cross_final = 1e-2;

  void set_all(double value);
};

struct SuiteConfig {
  std::uint64_t seed = 20240601;
  std::size_t dim = 2;
  std::vector<int> n_list{8, 16, 32, 64, 128};
  std::vector<int> microlocal_n_list{8, 16, 32, 64};
  double hbar_slack = 0.0;
  Tolerances tol;
  /// Target of the convergence suite; a random separated two-orbit 0.3/0.7 mix when absent.
  std::optional<ConvexMeasure> measure;
  /// Subset of suite names to run; all when empty.
  std::vector<std::string> suites;
};

/// Same structure as a measure file plus "seed", "n_list", "microlocal_n_list",
/// "hbar_slack", "tolerances" and "suites"; every key is optional.
SuiteConfig parse_config(const std::string& text);
SuiteConfig load_config(const std::string& path);
std::string config_to_json(const SuiteConfig& config);

/// FNV-1a of config_to_json, as 16 hex digits.
std::string config_hash(const SuiteConfig& config);
std::uint64_t fnv1a(const std::string& bytes);

std::vector<int> parse_int_list(const std::string& csv);

}  // namespace osclab
