#include "osclab/config.hpp"
#include "osclab/harness.hpp"
#include "osclab/metaplectic.hpp"
#include "osclab/suites.hpp"
#include "osclab/wigner.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

using namespace osclab;

namespace {

struct Common {
  std::string measure_path;
  std::size_t dim = 2;
  std::string n_list = "8,16,32,64,128";
  std::string family = "graded";
  std::uint64_t seed = 20240601;
  std::string out;
  std::optional<double> tol;
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot write {}", path));
  f << text;
}

std::string g17(double v) { return fmt::format("{:.17g}", v); }

using Metadata = std::map<std::string, std::string>;

// Effective inputs plus config_hash (FNV-1a over the sorted inputs), version and module versions.
Metadata report_metadata(const std::string& command, Metadata inputs) {
  inputs["command"] = command;
  std::string canonical;
  for (const auto& [k, v] : inputs) canonical += k + "=" + v + "\n";
  inputs["config_hash"] = fmt::format("{:016x}", fnv1a(canonical));
  inputs["version"] = kVersion;
  std::string modules;
  for (const auto& [name, version] : module_versions()) modules += fmt::format("{}{}:{}", modules.empty() ? "" : ";", name, version);
  inputs["modules"] = modules;
  return inputs;
}

std::string metadata_lines(const Metadata& m) {
  std::string out;
  for (const auto& [k, v] : m) out += fmt::format("# {}={}\n", k, v);
  return out;
}

ConvexMeasure measure_or_default(const Common& c, std::mt19937_64& rng) {
  if (!c.measure_path.empty()) return load_measure(c.measure_path);
  auto [a, b] = random_separated_orbits(c.dim, rng);
  return ConvexMeasure({{0.3, OrbitMeasure{a}}, {0.7, OrbitMeasure{b}}});
}

TestFamily family_for(const Common& c, std::size_t dim) {
  if (c.family == "graded") return TestFamily::graded(dim, 2);
  if (c.family == "graded1") return TestFamily::graded(dim, 1);
  TestFamily f = load_family(c.family);
  if (f.dim() != dim) throw ConfigError(fmt::format("{}: family dimension {} differs from {}", c.family, f.dim(), dim));
  return f;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stod(item));
  return out;
}

PhasePoint point_from(const std::vector<double>& v) {
  if (v.empty() || v.size() % 2 != 0) throw ConfigError("phase point needs 2d numbers (x then xi)");
  const auto d = static_cast<Eigen::Index>(v.size() / 2);
  PhasePoint z{RealVector(d), RealVector(d)};
  for (Eigen::Index k = 0; k < d; ++k) {
    z.x[k] = v[static_cast<std::size_t>(k)];
    z.xi[k] = v[static_cast<std::size_t>(d + k)];
  }
  return z;
}

std::string complex_vector(const ComplexVector& w) {
  std::string s;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    s += fmt::format("{}{}{:+.17g}i", k ? ", " : "", g17(w[k].real()), w[k].imag());
  }
  return "(" + s + ")";
}

int cmd_orbit(const Common& c, const std::string& generator) {
  std::vector<Orbit> orbits;
  if (!generator.empty()) {
    orbits.push_back(orbit_through(point_from(parse_doubles(generator))));
  } else if (!c.measure_path.empty()) {
    for (const auto& comp : load_measure(c.measure_path).components()) orbits.push_back(comp.measure.orbit);
  } else {
    orbits.push_back(reference_orbit(c.dim));
  }
  std::string generators;
  for (const auto& o : orbits) generators += (generators.empty() ? "" : ";") + complex_vector(o.w0());
  std::string out = metadata_lines(report_metadata("orbit", {{"orbits", generators}}));
  bool ok = true;
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    const Orbit& o = orbits[i];
    const OrthoSymplectic g = transporter(o);
    const ComplexMatrix u = to_unitary(g);
    const bool valid = is_ortho_symplectic(g.block_matrix(), 1e-10);
    const double column_gap = (u.col(0) - o.w0()).cwiseAbs().maxCoeff();
    ok = ok && valid && column_gap == 0.0;
    out += fmt::format("orbit {}\n  w0 = {}\n  transporter valid: {}\n  |U e_1 - w0|_max = {:.3e}\n  U =\n", i,
                       complex_vector(o.w0()), valid, column_gap);
    for (Eigen::Index r = 0; r < u.rows(); ++r) out += "    " + complex_vector(u.row(r).transpose()) + "\n";
  }
  emit(out, c.out);
  return ok ? 0 : 1;
}

int cmd_build_state(const Common& c) {
  std::mt19937_64 rng(c.seed);
  const ConvexMeasure mu = measure_or_default(c, rng);
  std::string out = metadata_lines(report_metadata(
      "build-state", {{"measure", measure_to_json(mu)}, {"n_list", c.n_list}, {"seed", std::to_string(c.seed)}}));
  out += "n,h_n,multi_index,coeff_re,coeff_im\n";
  std::string diag;
  for (int n : parse_int_list(c.n_list)) {
    const BuiltState s = build_state(mu, n);
    diag += fmt::format("n={} |g^(1)|={:.17g} eigen_residual={:.3e}\n", n, s.raw_norm, verify_eigen(s.state));
    for (const auto& [alpha, amp] : s.state.coeffs()) {
      std::string idx;
      for (std::size_t j = 0; j < alpha.dim(); ++j) idx += fmt::format("{}{}", j ? " " : "", alpha[j]);
      out += fmt::format("{},{},{},{},{}\n", n, g17(s.state.hbar()), idx, g17(amp.real()), g17(amp.imag()));
    }
  }
  emit(out, c.out);
  std::cerr << diag;
  return 0;
}

int cmd_converge(const Common& c) {
  std::mt19937_64 rng(c.seed);
  const ConvexMeasure mu = measure_or_default(c, rng);
  const TestFamily family = family_for(c, mu.dim());
  const double threshold = c.tol.value_or(Tolerances{}.converge_final);
  ConvergenceReport rep = converge_report(mu, family, parse_int_list(c.n_list));
  rep.metadata.merge(report_metadata("converge", {{"measure", measure_to_json(mu)},
                                                  {"n_list", c.n_list},
                                                  {"seed", std::to_string(c.seed)},
                                                  {"family", c.family},
                                                  {"threshold", g17(threshold)}}));
  emit(rep.to_csv(), c.out);
  bool ok = true;
  for (const auto& [id, v] : check_convergence(rep, threshold)) {
    if (!v.passed) {
      ok = false;
      std::cerr << fmt::format("FAIL {}: {}\n", id, v.reason);
    }
  }
  return ok ? 0 : 1;
}

int cmd_cross_terms(const Common& c) {
  std::mt19937_64 rng(c.seed);
  std::optional<Orbit> a;
  std::optional<Orbit> b;
  if (!c.measure_path.empty()) {
    const ConvexMeasure mu = load_measure(c.measure_path);
    if (mu.components().size() != 2) throw ConfigError("cross-terms needs a measure with exactly two components");
    a = mu.components()[0].measure.orbit;
    b = mu.components()[1].measure.orbit;
  } else {
    auto pair = random_separated_orbits(c.dim, rng);
    a = pair.first;
    b = pair.second;
  }
  const TestFamily family = family_for(c, a->dim());
  const double threshold = c.tol.value_or(Tolerances{}.cross_final);
  const CrossTermReport rep = cross_term_report(*a, *b, family, parse_int_list(c.n_list), threshold);
  const Metadata meta = report_metadata("cross-terms", {{"orbit_a", complex_vector(a->w0())},
                                                        {"orbit_b", complex_vector(b->w0())},
                                                        {"n_list", c.n_list},
                                                        {"seed", std::to_string(c.seed)},
                                                        {"family", c.family},
                                                        {"threshold", g17(threshold)}});
  emit(metadata_lines(meta) + rep.to_csv(), c.out);
  for (const auto& [id, v] : rep.verdicts) {
    if (!v.passed) std::cerr << fmt::format("FAIL {}: {}\n", id, v.reason);
  }
  return rep.passed() ? 0 : 1;
}

int cmd_microlocal(const Common& c, const std::string& center, double width, double amplitude) {
  PhasePoint z = center.empty() ? PhasePoint{RealVector::Zero(1), RealVector::Zero(1)} : point_from(parse_doubles(center));
  const BumpSymbol bump(z, width, amplitude);
  const DecaySeries s = microlocal_series(bump, parse_int_list(c.n_list));
  const double threshold = c.tol.value_or(Tolerances{}.microlocal_final);
  std::string out = metadata_lines(report_metadata("microlocal", {{"center", complex_vector(z.complex())},
                                                                  {"width", g17(width)},
                                                                  {"amplitude", g17(amplitude)},
                                                                  {"n_list", c.n_list},
                                                                  {"threshold", g17(threshold)}}));
  out += "n,h_n,value,resolution\n";
  for (std::size_t k = 0; k < s.n.size(); ++k) {
    out += fmt::format("{},{},{},{}\n", s.n[k], g17(hbar_schedule(s.n[k], static_cast<int>(bump.dim()))),
                       g17(s.value[k]), g17(s.resolution[k]));
  }
  emit(out, c.out);
  const ColumnVerdict v = check_decay(s, threshold);
  if (!v.passed) std::cerr << "FAIL " << v.reason << "\n";
  return v.passed ? 0 : 1;
}

int cmd_suites(const Common& c, const std::string& config_path, bool seed_given, bool dim_given, bool n_given) {
  SuiteConfig cfg = config_path.empty() ? SuiteConfig{} : load_config(config_path);
  if (seed_given) cfg.seed = c.seed;
  if (dim_given) cfg.dim = c.dim;
  if (n_given) cfg.n_list = parse_int_list(c.n_list);
  if (!c.measure_path.empty()) cfg.measure = load_measure(c.measure_path);
  if (c.tol) cfg.tol.set_all(*c.tol);
  const SuitesReport rep = run_suites(cfg);
  emit(rep.json, c.out);
  for (const auto& name : rep.violations()) std::cerr << "violated: " << name << "\n";
  return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic-oscillator eigenfunctions with prescribed semiclassical measures"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--measure", c.measure_path, "Measure description (JSON)");
    sub->add_option("--dim", c.dim, "Dimension d for generated measures")->check(CLI::Range(1, 16));
    sub->add_option("--n-list", c.n_list, "Comma-separated levels n");
    sub->add_option("--family", c.family, "graded, graded1 or a family file (JSON)");
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--out", c.out, "Output path (stdout when absent)");
    sub->add_option("--tol", c.tol, "Tolerance override");
  };

  std::string generator;
  auto* orbit = app.add_subcommand("orbit", "Print orbits and their transporters");
  add_common(orbit);
  orbit->add_option("--generator", generator, "Phase point x_1..x_d,xi_1..xi_d");

  auto* build = app.add_subcommand("build-state", "Fock coefficients of g_n as CSV");
  add_common(build);
  auto* converge = app.add_subcommand("converge", "Convergence report CSV");
  add_common(converge);
  auto* cross = app.add_subcommand("cross-terms", "Cross-term decay CSV");
  add_common(cross);

  std::string center;
  double width = 0.2;
  double amplitude = 1.0;
  auto* micro = app.add_subcommand("microlocal", "Microlocal norms of a Gaussian bump on f_n");
  add_common(micro);
  micro->add_option("--center", center, "Bump center x_1..x_d,xi_1..xi_d (default: origin, d = 1)");
  micro->add_option("--width", width, "Bump width")->check(CLI::PositiveNumber);
  micro->add_option("--amplitude", amplitude, "Bump amplitude");

  std::string config_path;
  auto* suites = app.add_subcommand("suites", "Run the property suites; writes a JSON summary");
  add_common(suites);
  suites->add_option("--config", config_path, "Config file (JSON)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (orbit->parsed()) return cmd_orbit(c, generator);
    if (build->parsed()) return cmd_build_state(c);
    if (converge->parsed()) return cmd_converge(c);
    if (cross->parsed()) return cmd_cross_terms(c);
    if (micro->parsed()) {
      if (!micro->count("--n-list")) c.n_list = "8,16,32,64";
      return cmd_microlocal(c, center, width, amplitude);
    }
    if (suites->parsed()) {
      return cmd_suites(c, config_path, suites->count("--seed") > 0, suites->count("--dim") > 0,
                        suites->count("--n-list") > 0);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
