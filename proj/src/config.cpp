#include "osclab/config.hpp"

#include <json.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace osclab {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& pointer, const std::string& msg) {
  throw ConfigError(fmt::format("{}: {}", pointer.empty() ? "/" : pointer, msg));
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offset to line:column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(fmt::format("line {} column {}: malformed JSON ({})", line, col, e.what()));
  }
}

double number_at(const json& j, const std::string& ptr) {
  if (!j.is_number()) bad(ptr, fmt::format("expected a number, found {}", j.type_name()));
  return j.get<double>();
}

std::int64_t integer_at(const json& j, const std::string& ptr) {
  if (!j.is_number_integer()) bad(ptr, fmt::format("expected an integer, found {}", j.type_name()));
  return j.get<std::int64_t>();
}

void require_object(const json& j, const std::string& ptr) {
  if (!j.is_object()) bad(ptr, fmt::format("expected an object, found {}", j.type_name()));
}

void reject_unknown(const json& j, const std::string& ptr, std::initializer_list<const char*> known) {
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) { return key == k; }) == known.end()) {
      bad(ptr + "/" + key, "unknown key");
    }
  }
}

ConvexMeasure measure_from(const json& j, const std::string& ptr) {
  require_object(j, ptr);
  if (!j.contains("dim")) bad(ptr, "missing key 'dim'");
  if (!j.contains("components")) bad(ptr, "missing key 'components'");
  const std::int64_t d = integer_at(j["dim"], ptr + "/dim");
  if (d < 1) bad(ptr + "/dim", "must be at least 1");
  const json& comps = j["components"];
  if (!comps.is_array() || comps.empty()) bad(ptr + "/components", "expected a non-empty array");
  std::vector<WeightedOrbit> out;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string cp = fmt::format("{}/components/{}", ptr, i);
    const json& c = comps[i];
    require_object(c, cp);
    reject_unknown(c, cp, {"weight", "generator"});
    if (!c.contains("weight")) bad(cp, "missing key 'weight'");
    if (!c.contains("generator")) bad(cp, "missing key 'generator'");
    const double w = number_at(c["weight"], cp + "/weight");
    const json& g = c["generator"];
    if (!g.is_array() || g.size() != static_cast<std::size_t>(2 * d)) {
      bad(cp + "/generator", fmt::format("expected an array of {} numbers (x then xi)", 2 * d));
    }
    PhasePoint z{RealVector(d), RealVector(d)};
    for (std::int64_t k = 0; k < d; ++k) {
      z.x[k] = number_at(g[static_cast<std::size_t>(k)], fmt::format("{}/generator/{}", cp, k));
      z.xi[k] = number_at(g[static_cast<std::size_t>(d + k)], fmt::format("{}/generator/{}", cp, d + k));
    }
    try {
      out.push_back({w, OrbitMeasure{orbit_through(z)}});
    } catch (const std::exception& e) {
      bad(cp + "/generator", e.what());
    }
  }
  try {
    return ConvexMeasure(std::move(out));
  } catch (const std::exception& e) {
    bad(ptr + "/components", e.what());
  }
}

std::vector<int> int_list(const json& j, const std::string& ptr) {
  if (!j.is_array() || j.empty()) bad(ptr, "expected a non-empty array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto v = integer_at(j[i], fmt::format("{}/{}", ptr, i));
    if (v < 0) bad(fmt::format("{}/{}", ptr, i), "must be non-negative");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

json measure_json(const ConvexMeasure& mu) {
  json comps = json::array();
  for (const auto& c : mu.components()) {
    const PhasePoint& z = c.measure.orbit.generator();
    json gen = json::array();
    for (Eigen::Index k = 0; k < z.x.size(); ++k) gen.push_back(z.x[k]);
    for (Eigen::Index k = 0; k < z.xi.size(); ++k) gen.push_back(z.xi[k]);
    comps.push_back({{"weight", c.weight}, {"generator", gen}});
  }
  return {{"dim", mu.dim()}, {"components", comps}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("{}: cannot open file", path));
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

const std::map<std::string, std::string>& module_versions() {
  static const std::map<std::string, std::string> v{{"fock-core", kVersion},         {"symplectic-geometry", kVersion},
                                                    {"metaplectic", kVersion},       {"weyl-quantization", kVersion},
                                                    {"measures", kVersion},          {"harness-cli", kVersion}};
  return v;
}

ConvexMeasure parse_measure(const std::string& text) { return measure_from(parse_text(text), ""); }

ConvexMeasure load_measure(const std::string& path) {
  try {
    return parse_measure(read_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

std::string measure_to_json(const ConvexMeasure& mu) { return measure_json(mu).dump(); }

TestFamily parse_family(const std::string& text) {
  const json j = parse_text(text);
  require_object(j, "");
  reject_unknown(j, "", {"dim", "symbols"});
  if (!j.contains("dim")) bad("", "missing key 'dim'");
  const auto d = integer_at(j["dim"], "/dim");
  if (d < 1) bad("/dim", "must be at least 1");
  if (!j.contains("symbols") || !j["symbols"].is_array() || j["symbols"].empty()) {
    bad("/symbols", "expected a non-empty array");
  }
  auto index_at = [&](const json& e, const std::string& ptr) {
    if (!e.is_array() || e.size() != static_cast<std::size_t>(d)) bad(ptr, fmt::format("expected {} integers", d));
    MultiIndex::Storage s;
    for (std::size_t k = 0; k < e.size(); ++k) {
      const auto v = integer_at(e[k], fmt::format("{}/{}", ptr, k));
      if (v < 0) bad(fmt::format("{}/{}", ptr, k), "must be non-negative");
      s.push_back(static_cast<int>(v));
    }
    return MultiIndex(std::move(s));
  };
  std::vector<TestSymbol> members;
  const json& syms = j["symbols"];
  for (std::size_t i = 0; i < syms.size(); ++i) {
    const std::string sp = fmt::format("/symbols/{}", i);
    require_object(syms[i], sp);
    reject_unknown(syms[i], sp, {"id", "terms"});
    if (!syms[i].contains("id") || !syms[i]["id"].is_string()) bad(sp + "/id", "expected a string");
    if (!syms[i].contains("terms") || !syms[i]["terms"].is_array()) bad(sp + "/terms", "expected an array");
    PolySymbol a(static_cast<std::size_t>(d));
    const json& terms = syms[i]["terms"];
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string tp = fmt::format("{}/terms/{}", sp, t);
      require_object(terms[t], tp);
      reject_unknown(terms[t], tp, {"beta", "gamma", "re", "im"});
      for (const char* key : {"beta", "gamma", "re"}) {
        if (!terms[t].contains(key)) bad(tp, fmt::format("missing key '{}'", key));
      }
      const double re = number_at(terms[t]["re"], tp + "/re");
      const double im = terms[t].contains("im") ? number_at(terms[t]["im"], tp + "/im") : 0.0;
      a.add_term(index_at(terms[t]["beta"], tp + "/beta"), index_at(terms[t]["gamma"], tp + "/gamma"), {re, im});
    }
    members.push_back({syms[i]["id"].get<std::string>(), std::move(a)});
  }
  return TestFamily(std::move(members));
}

TestFamily load_family(const std::string& path) {
  try {
    return parse_family(read_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

void Tolerances::set_all(double value) {
  eigen = unitarity = covariance = group = quadrature = trapezoid = value;
  microlocal_final = converge_final = cross_final = value;
}

SuiteConfig parse_config(const std::string& text) {
  const json j = parse_text(text);
  require_object(j, "");
  reject_unknown(j, "", {"seed", "dim", "components", "n_list", "microlocal_n_list", "hbar_slack", "tolerances", "suites"});
  SuiteConfig cfg;
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_number_unsigned()) bad("/seed", "expected a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  if (j.contains("dim")) {
    const auto d = integer_at(j["dim"], "/dim");
    if (d < 2) bad("/dim", "the convergence suite needs dim >= 2");
    cfg.dim = static_cast<std::size_t>(d);
  }
  if (j.contains("components")) {
    if (!j.contains("dim")) bad("", "'components' requires 'dim'");
    cfg.measure = measure_from(json{{"dim", j["dim"]}, {"components", j["components"]}}, "");
  }
  if (j.contains("n_list")) cfg.n_list = int_list(j["n_list"], "/n_list");
  if (j.contains("microlocal_n_list")) cfg.microlocal_n_list = int_list(j["microlocal_n_list"], "/microlocal_n_list");
  if (j.contains("hbar_slack")) cfg.hbar_slack = number_at(j["hbar_slack"], "/hbar_slack");
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    require_object(t, "/tolerances");
    std::map<std::string, double*> slots{{"eigen", &cfg.tol.eigen},
                                         {"unitarity", &cfg.tol.unitarity},
                                         {"covariance", &cfg.tol.covariance},
                                         {"group", &cfg.tol.group},
                                         {"quadrature", &cfg.tol.quadrature},
                                         {"trapezoid", &cfg.tol.trapezoid},
                                         {"microlocal_final", &cfg.tol.microlocal_final},
                                         {"converge_final", &cfg.tol.converge_final},
                                         {"cross_final", &cfg.tol.cross_final}};
    for (const auto& [key, value] : t.items()) {
      auto it = slots.find(key);
      if (it == slots.end()) bad("/tolerances/" + key, "unknown tolerance");
      const double v = number_at(value, "/tolerances/" + key);
      if (v < 0.0) bad("/tolerances/" + key, "must be non-negative");
      *it->second = v;
    }
  }
  if (j.contains("suites")) {
    const json& s = j["suites"];
    if (!s.is_array()) bad("/suites", "expected an array of suite names");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!s[i].is_string()) bad(fmt::format("/suites/{}", i), "expected a string");
      cfg.suites.push_back(s[i].get<std::string>());
    }
  }
  return cfg;
}

SuiteConfig load_config(const std::string& path) {
  try {
    return parse_config(read_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

std::string config_to_json(const SuiteConfig& c) {
  json j{{"seed", c.seed},
         {"dim", c.dim},
         {"n_list", c.n_list},
         {"microlocal_n_list", c.microlocal_n_list},
         {"hbar_slack", c.hbar_slack},
         {"suites", c.suites},
         {"tolerances",
          {{"eigen", c.tol.eigen},
           {"unitarity", c.tol.unitarity},
           {"covariance", c.tol.covariance},
           {"group", c.tol.group},
           {"quadrature", c.tol.quadrature},
           {"trapezoid", c.tol.trapezoid},
           {"microlocal_final", c.tol.microlocal_final},
           {"converge_final", c.tol.converge_final},
           {"cross_final", c.tol.cross_final}}}};
  if (c.measure) j["components"] = measure_json(*c.measure)["components"];
  return j.dump();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const SuiteConfig& config) { return fmt::format("{:016x}", fnv1a(config_to_json(config))); }

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("'{}' is not an integer", item));
    }
    if (used != item.size() || v < 0) throw ConfigError(fmt::format("'{}' is not a non-negative integer", item));
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty integer list");
  return out;
}

}  // namespace osclab
