#include "osclab/suites.hpp"

#include "osclab/harness.hpp"
#include "osclab/metaplectic.hpp"
#include "osclab/wigner.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace osclab {
namespace {

using nlohmann::json;

class Recorder {
 public:
  explicit Recorder(SuiteResult& suite) : suite_(suite) {}

  // Passes when observed <= threshold.
  void bound(std::string name, double observed, double threshold, std::string detail = {}) {
    suite_.checks.push_back({std::move(name), observed <= threshold, observed, threshold, std::move(detail)});
  }
  void flag(std::string name, bool ok, double observed, double threshold, std::string detail = {}) {
    suite_.checks.push_back({std::move(name), ok, observed, threshold, std::move(detail)});
  }

 private:
  SuiteResult& suite_;
};

std::mt19937_64 suite_rng(std::uint64_t seed, const std::string& name) {
  const std::uint64_t tag = fnv1a(name);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
  return std::mt19937_64(seq);
}

double max_abs(const RealMatrix& m) { return m.cwiseAbs().maxCoeff(); }

void ortho_symplectic_suite(const SuiteConfig& cfg, std::mt19937_64& rng, Recorder& rec) {
  for (std::size_t d = 1; d <= 3; ++d) {
    double worst = 0.0;
    bool all = true;
    for (int k = 0; k < 100; ++k) {
      const OrthoSymplectic g = random_ortho_symplectic(d, rng);
      const OrthoSymplectic h = random_ortho_symplectic(d, rng);
      for (const RealMatrix& m : {(g * h).block_matrix(), g.inverse().block_matrix()}) {
        const auto n = m.rows();
        RealMatrix j = RealMatrix::Zero(n, n);
        j.topRightCorner(n / 2, n / 2) = RealMatrix::Identity(n / 2, n / 2);
        j.bottomLeftCorner(n / 2, n / 2) = -RealMatrix::Identity(n / 2, n / 2);
        worst = std::max({worst, max_abs(m * m.transpose() - RealMatrix::Identity(n, n)),
                          max_abs(m.transpose() * j * m - j)});
        all = all && is_ortho_symplectic(m, cfg.tol.group);
      }
    }
    rec.flag(fmt::format("ortho_symplectic.closure[d={}]", d), all, worst, cfg.tol.group,
             "100 random products and inverses");
    const int dim = tangent_dimension_check(random_ortho_symplectic(d, rng));
    rec.flag(fmt::format("ortho_symplectic.tangent_dimension[d={}]", d), dim == static_cast<int>(d * d), dim,
             static_cast<double>(d * d));
  }
  for (std::size_t q = 2; q <= 4; ++q) {
    int worst = 0;
    bool all = true;
    for (int k = 0; k < 5; ++k) {
      const int dim = hermitian_annihilator_dim(random_sphere_point(q, rng).complex());
      all = all && dim == static_cast<int>((q - 1) * (q - 1));
      worst = std::max(worst, std::abs(dim - static_cast<int>((q - 1) * (q - 1))));
    }
    rec.flag(fmt::format("ortho_symplectic.annihilator_dimension[q={}]", q), all, worst, 0.0,
             "max |dim - (q-1)^2| over 5 random vectors");
  }
}

void eigen_suite(const SuiteConfig& cfg, std::mt19937_64& rng, Recorder& rec) {
  std::vector<int> ns{0};
  ns.insert(ns.end(), cfg.n_list.begin(), cfg.n_list.end());
  for (int d = 1; d <= 3; ++d) {
    for (int n : ns) {
      const double predicted = std::abs((2.0 * n + d) * cfg.hbar_slack);
      for (int k = 0; k < 3; ++k) {
        const auto g = transporter(orbit_through(random_sphere_point(static_cast<std::size_t>(d), rng)));
        const double r = verify_eigen(transport_reference(n, g, cfg.hbar_slack));
        rec.bound(fmt::format("eigen.residual[d={},n={},orbit={}]", d, n, k), std::abs(r - predicted), cfg.tol.eigen,
                  fmt::format("residual {:.6e}, predicted {:.6e}", r, predicted));
      }
      if (d >= 2) {
        auto [a, b] = random_separated_orbits(static_cast<std::size_t>(d), rng);
        const ConvexMeasure mu({{0.4, OrbitMeasure{a}}, {0.6, OrbitMeasure{b}}});
        const double r = verify_eigen(build_state(mu, n, cfg.hbar_slack).state);
        rec.bound(fmt::format("eigen.residual[d={},n={},mix]", d, n), std::abs(r - predicted), cfg.tol.eigen,
                  fmt::format("residual {:.6e}, predicted {:.6e}", r, predicted));
      }
    }
  }
}

void unitarity_suite(const SuiteConfig& cfg, std::mt19937_64& rng, Recorder& rec) {
  for (std::size_t d = 1; d <= 3; ++d) {
    for (int n : {0, 1, 2, 10, 50, 100, 150, 200}) {
      const auto g = random_ortho_symplectic(d, rng);
      const double norm = transport_reference(n, g).state.norm();
      rec.bound(fmt::format("unitarity.norm[d={},n={}]", d, n), std::abs(norm - 1.0), cfg.tol.unitarity);
    }
  }
}

void covariance_suite(const SuiteConfig& cfg, std::mt19937_64& rng, Recorder& rec) {
  for (std::size_t d = 1; d <= 3; ++d) {
    for (int k = 0; k < 4; ++k) {
      const auto g = random_ortho_symplectic(d, rng);
      const int shift = std::uniform_int_distribution<int>(-2, 2)(rng);
      const PolySymbol a = random_poly_symbol(d, 4, 3, rng, shift);
      const int n = std::uniform_int_distribution<int>(2, 10)(rng);
      const double h = hbar_schedule(n, static_cast<int>(d));
      const FockState u = random_level_state(d, n, h, 2, rng);
      const FockState v = random_level_state(d, n - shift, h, 2, rng);
      const auto [lhs, rhs] = covariance_check(a, g, u, v);
      const double diff = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
      rec.bound(fmt::format("covariance.identity[d={},case={}]", d, k), diff, cfg.tol.covariance,
                fmt::format("n={}, level shift {}", n, shift));
    }
  }
}

void quadrature_suite(const SuiteConfig& cfg, std::mt19937_64& rng, Recorder& rec) {
  for (std::size_t d = 1; d <= 2; ++d) {
    for (int k = 0; k < 3; ++k) {
      const int shift = std::uniform_int_distribution<int>(-2, 2)(rng);
      const PolySymbol a = random_poly_symbol(d, 4, 2, rng, shift);
      const int n = std::uniform_int_distribution<int>(2, 8)(rng);
      const double h = hbar_schedule(n, static_cast<int>(d));
      const FockState u = random_level_state(d, n, h, 2, rng);
      const FockState v = random_level_state(d, n - shift, h, 2, rng);
      const std::string name = fmt::format("quadrature.dual_path[d={},case={}]", d, k);
      try {
        QuadratureSpec spec;
        spec.tolerance = cfg.tol.quadrature;
        const Complex q = quadrature_expectation(a, u, v, spec);
        rec.bound(name, std::abs(q - expectation(a, u, v)), cfg.tol.quadrature);
      } catch (const QuadratureError& e) {
        rec.flag(name, false, INFINITY, cfg.tol.quadrature, e.what());
      }
    }
  }
}

void microlocal_suite(const SuiteConfig& cfg, std::mt19937_64&, Recorder& rec) {
  for (double radius : {0.0, 2.0}) {
    RealVector c = RealVector::Zero(1);
    c[0] = radius;
    const BumpSymbol bump(PhasePoint{c, RealVector::Zero(1)}, 0.2);
    const std::string name = fmt::format("microlocal.decay[radius={}]", radius);
    try {
      const DecaySeries s = microlocal_series(bump, cfg.microlocal_n_list);
      const ColumnVerdict v = check_decay(s, cfg.tol.microlocal_final);
      std::string values;
      for (std::size_t k = 0; k < s.n.size(); ++k) {
        values += fmt::format("{}n={}: {:.3e} (res {:.1e})", k ? ", " : "", s.n[k], s.value[k], s.resolution[k]);
      }
      rec.flag(name, v.passed, s.value.back(), cfg.tol.microlocal_final, v.passed ? values : v.reason + "; " + values);
    } catch (const QuadratureError& e) {
      rec.flag(name, false, INFINITY, cfg.tol.microlocal_final, e.what());
    }
  }
}

void measures_suite(const SuiteConfig& cfg, std::mt19937_64& rng, Recorder& rec) {
  double trap = 0.0;
  double flow_gap = 0.0;
  for (int k = 0; k < 12; ++k) {
    const std::size_t d = 1 + static_cast<std::size_t>(k % 3);
    const PolySymbol a = random_poly_symbol(d, 8, 4, rng);
    const OrbitMeasure m{orbit_through(random_sphere_point(d, rng))};
    trap = std::max(trap, std::abs(orbit_integral(a, m) - orbit_integral_trapezoid(a, m)));
    const double t = std::uniform_real_distribution<double>(0.0, std::numbers::pi)(rng);
    flow_gap = std::max(flow_gap, std::abs(orbit_integral(a.compose_flow(t), m) - orbit_integral(a, m)));
  }
  rec.bound("measures.trapezoid_agreement", trap, cfg.tol.trapezoid, "12 random symbols of degree <= 8");
  rec.bound("measures.flow_invariance", flow_gap, cfg.tol.trapezoid);

  constexpr int m = 400;
  const double allowance = 3.0 / std::sqrt(m);
  auto [oa, ob] = random_separated_orbits(2, rng);
  const PhasePoint pa = oa.generator();
  const PhasePoint pb = ob.generator();
  PointSampler two_point = [&](std::mt19937_64& r) {
    const double t = std::uniform_real_distribution<double>(0.0, std::numbers::pi)(r);
    return flow(t, std::bernoulli_distribution(0.3)(r) ? pa : pb);
  };
  const TestFamily family = TestFamily::graded(2);
  const auto approx = approximate_invariant(two_point, m, family, rng);
  double wa = 0.0;
  double wb = 0.0;
  for (const auto& c : approx.measure.components()) {
    if (c.measure.orbit == oa) wa += c.weight;
    if (c.measure.orbit == ob) wb += c.weight;
  }
  rec.bound("measures.approximate_invariant_weights", std::max(std::abs(wa - 0.3), std::abs(wb - 0.7)), allowance,
            fmt::format("recovered ({:.4f}, {:.4f}) from m={}, {} components", wa, wb, m,
                        approx.measure.components().size()));

  PointSampler uniform = [](std::mt19937_64& r) { return random_sphere_point(2, r); };
  const auto sphere = approximate_invariant(uniform, m, family, rng);
  const PolySymbol w1 = PolySymbol::w_bar(2, 0) * PolySymbol::w(2, 0);
  rec.bound("measures.uniform_sphere_mean", std::abs(convex_integral(w1, sphere.measure) - 0.5), allowance);

  bool axioms = true;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    ValueTable x(family.size()), y(family.size()), z(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) {
      x[i] = {u(rng), u(rng)};
      y[i] = {u(rng), u(rng)};
      z[i] = {u(rng), u(rng)};
    }
    const double xy = weak_star_distance(x, y, family);
    axioms = axioms && weak_star_distance(x, x, family) == 0.0 && xy == weak_star_distance(y, x, family) && xy > 0.0 &&
             xy <= weak_star_distance(x, z, family) + weak_star_distance(z, y, family);
  }
  rec.flag("measures.weak_star_metric_axioms", axioms, axioms ? 0.0 : 1.0, 0.0, "20 random table triples");
}

ConvexMeasure suite_measure(const SuiteConfig& cfg, std::mt19937_64& rng) {
  if (cfg.measure) return *cfg.measure;
  auto [a, b] = random_separated_orbits(cfg.dim, rng);
  return ConvexMeasure({{0.3, OrbitMeasure{a}}, {0.7, OrbitMeasure{b}}});
}

void convergence_suite(const SuiteConfig& cfg, std::mt19937_64& rng, Recorder& rec) {
  const ConvexMeasure mu = suite_measure(cfg, rng);
  const TestFamily family = TestFamily::graded(mu.dim());
  const ConvergenceReport report = converge_report(mu, family, cfg.n_list, cfg.hbar_slack);
  const auto verdicts = check_convergence(report, cfg.tol.converge_final);
  for (const auto& id : report.symbol_ids()) {
    const auto col = report.column(id);
    const auto& v = verdicts.at(id);
    rec.flag(fmt::format("convergence.symbol[{}]", id), v.passed, col.back(), cfg.tol.converge_final, v.reason);
  }
}

void cross_terms_suite(const SuiteConfig& cfg, std::mt19937_64& rng, Recorder& rec) {
  const TestFamily family = TestFamily::graded(cfg.dim);
  auto [a, b] = random_separated_orbits(cfg.dim, rng);
  const CrossTermReport rep = cross_term_report(a, b, family, cfg.n_list, cfg.tol.cross_final);
  for (const auto& id : rep.symbol_ids) {
    double last = 0.0;
    for (const auto& r : rep.rows) {
      if (r.symbol_id == id && r.n == cfg.n_list.back()) last = r.abs_value;
    }
    const auto& v = rep.verdicts.at(id);
    rec.flag(fmt::format("cross_terms.random_pair[{}]", id), v.passed, last, cfg.tol.cross_final, v.reason);
  }
  PhasePoint e1{RealVector::Zero(static_cast<Eigen::Index>(cfg.dim)), RealVector::Zero(static_cast<Eigen::Index>(cfg.dim))};
  PhasePoint e2 = e1;
  e1.x[0] = 1.0;
  e2.x[1] = 1.0;
  std::vector<int> positive;
  for (int n : cfg.n_list) {
    if (n >= 1) positive.push_back(n);
  }
  if (!positive.empty()) {
    const PolySymbol one = PolySymbol::constant(cfg.dim, 1.0);
    const TestFamily just_one({{"1", one}});
    const CrossTermReport axis = cross_term_report(orbit_through(e1), orbit_through(e2), just_one, positive);
    double worst = 0.0;
    for (const auto& r : axis.rows) worst = std::max(worst, r.abs_value);
    rec.flag("cross_terms.axis_pair_exact_zero", worst == 0.0, worst, 0.0, "a = 1, orbits through e_1 and e_2");
  }
}

using SuiteFn = std::function<void(const SuiteConfig&, std::mt19937_64&, Recorder&)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"ortho_symplectic", ortho_symplectic_suite}, {"eigen", eigen_suite},
      {"unitarity", unitarity_suite},               {"covariance", covariance_suite},
      {"quadrature", quadrature_suite},             {"microlocal", microlocal_suite},
      {"measures", measures_suite},                 {"convergence", convergence_suite},
      {"cross_terms", cross_terms_suite}};
  return r;
}

json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

bool SuiteResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

bool SuitesReport::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
}

std::vector<std::string> SuitesReport::violations() const {
  std::vector<std::string> out;
  for (const auto& s : suites) {
    for (const auto& c : s.checks) {
      if (!c.passed) out.push_back(c.name);
    }
  }
  return out;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

SuitesReport run_suites(const SuiteConfig& config) {
  for (const auto& s : config.suites) {
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end()) {
      throw ConfigError(fmt::format("/suites: unknown suite '{}'", s));
    }
  }
  if (config.measure && config.measure->dim() != config.dim) {
    throw ConfigError("/components: measure dimension differs from /dim");
  }
  SuitesReport report;
  for (const auto& [name, fn] : registry()) {
    if (!config.suites.empty() && std::find(config.suites.begin(), config.suites.end(), name) == config.suites.end()) {
      continue;
    }
    SuiteResult suite{name, {}};
    Recorder rec(suite);
    auto rng = suite_rng(config.seed, name);
    try {
      fn(config, rng, rec);
    } catch (const std::exception& e) {
      rec.flag(name + ".completed", false, INFINITY, 0.0, e.what());
    }
    report.suites.push_back(std::move(suite));
  }

  json suites = json::array();
  for (const auto& s : report.suites) {
    json checks = json::array();
    for (const auto& c : s.checks) {
      json entry{{"name", c.name},
                 {"passed", c.passed},
                 {"observed", finite_or_string(c.observed)},
                 {"threshold", finite_or_string(c.threshold)}};
      if (!c.detail.empty()) entry["detail"] = c.detail;
      checks.push_back(std::move(entry));
    }
    suites.push_back({{"name", s.name}, {"passed", s.passed()}, {"checks", std::move(checks)}});
  }
  const json summary{{"version", kVersion},
                     {"modules", module_versions()},
                     {"config_hash", config_hash(config)},
                     {"config", json::parse(config_to_json(config))},
                     {"passed", report.passed()},
                     {"violations", report.violations()},
                     {"suites", std::move(suites)}};
  report.json = summary.dump(2) + "\n";
  return report;
}

}  // namespace osclab
