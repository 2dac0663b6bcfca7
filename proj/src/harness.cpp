#include "osclab/harness.hpp"

#include "osclab/metaplectic.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace osclab {
namespace {

constexpr double kZeroFloor = 1e-14;

std::string g17(double v) { return fmt::format("{:.17g}", v); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::vector<int> default_n_list() { return {8, 16, 32, 64, 128}; }

BuiltState build_state(const ConvexMeasure& mu, int n, double slack) {
  const std::size_t d = mu.dim();
  FockState g1(d, hbar_schedule(n, static_cast<int>(d), slack));
  for (const auto& c : mu.components()) {
    const TransportedState f = transport_reference(n, transporter(c.measure.orbit), slack);
    g1 += f.state.scaled(std::sqrt(c.weight));
  }
  const double raw = g1.norm();
  return {g1.normalized(), raw};
}

std::pair<Orbit, Orbit> random_separated_orbits(std::size_t d, std::mt19937_64& rng, double max_overlap) {
  if (d < 2) throw std::invalid_argument("random_separated_orbits: d = 1 has a single orbit");
  for (;;) {
    Orbit a = orbit_through(random_sphere_point(d, rng));
    Orbit b = orbit_through(random_sphere_point(d, rng));
    if (std::abs(a.w0().dot(b.w0())) <= max_overlap) return {std::move(a), std::move(b)};
  }
}

bool CrossTermReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& kv) { return kv.second.passed; });
}

std::string CrossTermReport::to_csv() const {
  std::string out = "n,symbol_id,abs_value\n";
  for (const auto& r : rows) out += fmt::format("{},{},{}\n", r.n, r.symbol_id, g17(r.abs_value));
  return out;
}

CrossTermReport cross_term_report(const Orbit& a, const Orbit& b, const TestFamily& family,
                                  const std::vector<int>& n_list, double final_threshold) {
  if (a == b) throw std::invalid_argument("cross_term_report: the two orbits are equal");
  if (a.dim() != family.dim() || b.dim() != family.dim()) {
    throw std::invalid_argument("cross_term_report: dimension mismatch");
  }
  if (n_list.empty()) throw std::invalid_argument("cross_term_report: empty n list");
  const OrthoSymplectic ga = transporter(a);
  const OrthoSymplectic gb = transporter(b);
  CrossTermReport rep;
  rep.n_list = n_list;
  std::map<std::string, std::vector<double>> columns;
  for (const auto& m : family.members()) rep.symbol_ids.push_back(m.id);
  for (int n : n_list) {
    const FockState fa = transport_reference(n, ga).state;
    const FockState fb = transport_reference(n, gb).state;
    for (const auto& m : family.members()) {
      const double v = std::abs(expectation(m.symbol, fa, fb));
      rep.rows.push_back({n, m.id, v});
      columns[m.id].push_back(v);
    }
  }
  for (const auto& [id, col] : columns) {
    ColumnVerdict verdict;
    if (!(col.back() <= final_threshold)) {
      verdict = {false, fmt::format("value {:.3e} at n={} exceeds {:.1e}", col.back(), n_list.back(), final_threshold)};
    }
    for (std::size_t k = 0; k + 1 < col.size() && verdict.passed; ++k) {
      if (col[k + 1] > kZeroFloor && col[k + 1] > 2.0 * col[k]) {
        verdict = {false, fmt::format("value grows from {:.3e} (n={}) to {:.3e} (n={})", col[k], n_list[k], col[k + 1],
                                      n_list[k + 1])};
      }
    }
    rep.verdicts[id] = verdict;
  }
  return rep;
}

std::string ConvergenceReport::to_csv() const {
  std::string out;
  for (const auto& [k, v] : metadata) out += fmt::format("# {}={}\n", k, v);
  out += "n,h_n,symbol_id,value_re,value_im,target_re,target_im,abs_error\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", r.n, g17(r.hbar), r.symbol_id, g17(r.value.real()),
                       g17(r.value.imag()), g17(r.target.real()), g17(r.target.imag()), g17(r.abs_error));
  }
  return out;
}

ConvergenceReport ConvergenceReport::from_csv(const std::string& text) {
  ConvergenceReport rep;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  double slack = 0.0;
  auto fail = [&](const std::string& msg) -> void {
    throw std::invalid_argument(fmt::format("ConvergenceReport CSV line {}: {}", line_no, msg));
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail("metadata line without '='");
      rep.metadata[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    if (!header_seen) {
      if (line != "n,h_n,symbol_id,value_re,value_im,target_re,target_im,abs_error") fail("unexpected header");
      header_seen = true;
      auto it = rep.metadata.find("dim");
      if (it == rep.metadata.end()) fail("missing '# dim=' metadata");
      rep.dim = static_cast<std::size_t>(std::stoul(it->second));
      if (auto sl = rep.metadata.find("hbar_slack"); sl != rep.metadata.end()) slack = std::stod(sl->second);
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 8) fail(fmt::format("expected 8 fields, found {}", f.size()));
    auto number = [&](const std::string& field) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(field, &used);
      } catch (const std::exception&) {
        fail(fmt::format("'{}' is not a number", field));
      }
      if (used != field.size()) fail(fmt::format("trailing characters in '{}'", field));
      return v;
    };
    ConvergenceRow r;
    r.n = static_cast<int>(number(f[0]));
    r.hbar = number(f[1]);
    r.symbol_id = f[2];
    r.value = {number(f[3]), number(f[4])};
    r.target = {number(f[5]), number(f[6])};
    const double stored = number(f[7]);
    const double expected_h = hbar_schedule(r.n, static_cast<int>(rep.dim), slack);
    if (r.hbar != expected_h) fail(fmt::format("h_n = {} does not match the schedule value {}", f[1], g17(expected_h)));
    r.abs_error = std::abs(r.value - r.target);
    if (std::abs(r.abs_error - stored) > 1e-12 * std::max(1.0, stored)) {
      fail(fmt::format("abs_error {} differs from recomputed {}", f[7], g17(r.abs_error)));
    }
    rep.rows.push_back(std::move(r));
  }
  if (!header_seen) throw std::invalid_argument("ConvergenceReport CSV: no header row");
  return rep;
}

std::vector<double> ConvergenceReport::column(const std::string& symbol_id) const {
  std::vector<std::pair<int, double>> v;
  for (const auto& r : rows) {
    if (r.symbol_id == symbol_id) v.emplace_back(r.n, r.abs_error);
  }
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (const auto& p : v) out.push_back(p.second);
  return out;
}

std::vector<std::string> ConvergenceReport::symbol_ids() const {
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const auto& r : rows) {
    if (seen.insert(r.symbol_id).second) ids.push_back(r.symbol_id);
  }
  return ids;
}

std::map<std::string, ColumnVerdict> check_convergence(const ConvergenceReport& report, double final_threshold,
                                                      double zero_floor) {
  std::map<std::string, ColumnVerdict> out;
  for (const auto& id : report.symbol_ids()) {
    const auto col = report.column(id);
    ColumnVerdict v;
    std::vector<double> ratios;
    for (std::size_t k = 0; k + 1 < col.size(); ++k) {
      if (col[k] <= zero_floor && col[k + 1] <= zero_floor) continue;
      ratios.push_back(col[k] == 0.0 ? INFINITY : col[k + 1] / col[k]);
    }
    if (!(col.back() <= final_threshold)) {
      v = {false, fmt::format("final error {:.3e} exceeds {:.1e}", col.back(), final_threshold)};
    } else if (!ratios.empty() && !(median(ratios) < 1.0)) {
      v = {false, fmt::format("median successive error ratio {:.3f} is not below 1", median(ratios))};
    }
    out[id] = v;
  }
  return out;
}

ConvergenceReport converge_report(const ConvexMeasure& mu, const TestFamily& family, const std::vector<int>& n_list,
                                  double slack) {
  if (mu.dim() != family.dim()) throw std::invalid_argument("converge_report: dimension mismatch");
  ConvergenceReport rep;
  rep.dim = mu.dim();
  rep.metadata["dim"] = std::to_string(rep.dim);
  if (slack != 0.0) rep.metadata["hbar_slack"] = g17(slack);
  const ValueTable targets = value_table(family, mu);
  for (int n : n_list) {
    const BuiltState g = build_state(mu, n, slack);
    for (std::size_t k = 0; k < family.size(); ++k) {
      const Complex value = expectation(family[k].symbol, g.state, g.state);
      rep.rows.push_back({n, g.state.hbar(), family[k].id, value, targets[k], std::abs(value - targets[k])});
    }
  }
  return rep;
}

namespace {

MultiIndex random_index(std::size_t d, int level, std::mt19937_64& rng) {
  MultiIndex::Storage e(d, 0);
  std::uniform_int_distribution<std::size_t> pick(0, d - 1);
  for (int k = 0; k < level; ++k) ++e[pick(rng)];
  return MultiIndex(std::move(e));
}

Complex gaussian_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double re = n01(rng);
  const double im = n01(rng);
  return {re, im};
}

}  // namespace

PolySymbol random_poly_symbol(std::size_t d, int max_degree, int num_terms, std::mt19937_64& rng,
                              std::optional<int> level_shift) {
  if (max_degree < 0 || num_terms < 1) throw std::invalid_argument("random_poly_symbol: bad arguments");
  if (level_shift && std::abs(*level_shift) > max_degree) {
    throw std::invalid_argument("random_poly_symbol: level shift exceeds the degree");
  }
  PolySymbol a(d);
  for (int t = 0; t < num_terms; ++t) {
    int b = 0;
    int c = 0;
    if (level_shift) {
      const int s = *level_shift;
      const int lo = std::max(0, -s);
      const int hi = (max_degree - s) / 2;
      b = std::uniform_int_distribution<int>(lo, std::max(lo, hi))(rng);
      c = b + s;
    } else {
      const int total = std::uniform_int_distribution<int>(0, max_degree)(rng);
      b = std::uniform_int_distribution<int>(0, total)(rng);
      c = total - b;
    }
    const MultiIndex beta = random_index(d, b, rng);
    const MultiIndex gamma = random_index(d, c, rng);
    a.add_term(beta, gamma, gaussian_complex(rng));
  }
  return a;
}

FockState random_level_state(std::size_t d, int level, double hbar, int count, std::mt19937_64& rng) {
  if (count < 1 || level < 0) throw std::invalid_argument("random_level_state: bad arguments");
  // Number of multi-indices of this level, capped to avoid overflow.
  double available = 1.0;
  for (std::size_t k = 1; k < d && available < count; ++k) available = available * (level + k) / k;
  const int target = static_cast<int>(std::min<double>(count, available));
  std::set<MultiIndex> picked;
  while (static_cast<int>(picked.size()) < target) picked.insert(random_index(d, level, rng));
  FockState u(d, hbar);
  for (const auto& alpha : picked) u.add(alpha, gaussian_complex(rng));
  return u.normalized();
}

DecaySeries microlocal_series(const BumpSymbol& a, const std::vector<int>& n_list) {
  DecaySeries out;
  for (int n : n_list) {
    const MicrolocalEstimate m = microlocal_norm(a, reference_state(n, static_cast<int>(a.dim())));
    out.n.push_back(n);
    out.value.push_back(m.value);
    out.resolution.push_back(m.resolution);
  }
  return out;
}

ColumnVerdict check_decay(const DecaySeries& s, double final_threshold) {
  if (s.value.empty()) return {false, "empty series"};
  for (std::size_t k = 0; k + 1 < s.value.size(); ++k) {
    if (!(s.value[k + 1] < s.value[k]) && !(s.value[k + 1] <= s.resolution[k + 1])) {
      return {false, fmt::format("no decrease from n={} ({:.3e}) to n={} ({:.3e}, resolution {:.1e})", s.n[k],
                                 s.value[k], s.n[k + 1], s.value[k + 1], s.resolution[k + 1])};
    }
  }
  if (!(s.value.back() < final_threshold)) {
    return {false, fmt::format("final value {:.3e} at n={} is not below {:.1e}", s.value.back(), s.n.back(),
                               final_threshold)};
  }
  return {};
}

}  // namespace osclab
