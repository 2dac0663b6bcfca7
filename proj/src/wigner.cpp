#include "osclab/wigner.hpp"

#include "osclab/hermite.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <vector>

namespace osclab {
namespace {

using Factor = std::function<double(double)>;

struct Grid {
  double h = 0.0;
  PositionRule x;
  int half_s = 0;  // s_l = l * ds, l = -half_s .. half_s
  double ds = 0.0;
  int half_xi = 0;
  double dxi = 0.0;
};

// Grid for states with occupation numbers <= max_level. The integrand lives where the
// Hermite functions do: |x|, |xi| <= sqrt((2L+1)h) plus a few sqrt(h) of Gaussian tail.
Grid make_grid(double h, int max_level, int degree, double bump_width, double refinement) {
  const double turning = std::sqrt((2.0 * max_level + 1.0) * h);
  const double range = (turning + 7.0 * std::sqrt(h)) * (1.0 + 0.25 * std::log2(refinement));
  const double s_range = 2.0 * range;
  constexpr double kSafety = 0.8;

  Grid g;
  g.h = h;
  int nx = max_level + degree / 2 + 24;
  if (bump_width > 0.0) nx += static_cast<int>(std::ceil(std::pow(range / bump_width, 2)));
  g.x = position_rule(static_cast<int>(std::ceil(nx * refinement)), h);
  // Offset grid resolves frequencies up to (turning + range)/h; the xi grid keeps the
  // aliases of the offset integral outside |s| <= s_range.
  g.ds = kSafety * std::numbers::pi * h / (turning + range) / refinement;
  g.half_s = static_cast<int>(std::ceil(s_range / g.ds));
  g.dxi = kSafety * std::numbers::pi * h / s_range / refinement;
  g.half_xi = static_cast<int>(std::ceil(range / g.dxi));
  return g;
}

// Row-major |ms| x |ks| table of complex values.
struct Table {
  std::size_t cols = 0;
  std::vector<Complex> data;
  Complex& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  Complex at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// tables[f][g](i, j) = integral of X_f(x) Xi_g(xi) W_{phi_ms[i], phi_ks[j]}(x, xi) dx dxi.
struct OneDimTables {
  std::vector<std::vector<Table>> tables;
  double abs_mass = 0.0;
};

OneDimTables one_dim_tables(const Grid& grid, const std::vector<int>& ms, const std::vector<int>& ks,
                            const std::vector<Factor>& x_factors, const std::vector<Factor>& xi_factors) {
  const double h = grid.h;
  const int ns = 2 * grid.half_s + 1;
  const std::size_t nq = xi_factors.size();
  const std::size_t np = x_factors.size();

  // Xi_g(s_l) = sum_r dxi c_g(xi_r) exp(-i s_l xi_r / h)
  std::vector<std::vector<Complex>> xi_hat(nq, std::vector<Complex>(static_cast<std::size_t>(ns)));
  {
    std::vector<std::vector<double>> cval(nq);
    for (std::size_t g = 0; g < nq; ++g) {
      for (int r = -grid.half_xi; r <= grid.half_xi; ++r) cval[g].push_back(xi_factors[g](r * grid.dxi));
    }
    for (int l = -grid.half_s; l <= grid.half_s; ++l) {
      const double s = l * grid.ds;
      for (int r = -grid.half_xi; r <= grid.half_xi; ++r) {
        const Complex phase = std::polar(grid.dxi, -s * (r * grid.dxi) / h);
        for (std::size_t g = 0; g < nq; ++g) {
          xi_hat[g][static_cast<std::size_t>(l + grid.half_s)] += cval[g][static_cast<std::size_t>(r + grid.half_xi)] * phase;
        }
      }
    }
  }

  const int top = std::max(*std::max_element(ms.begin(), ms.end()), *std::max_element(ks.begin(), ks.end()));
  OneDimTables out;
  out.tables.assign(np, std::vector<Table>(nq));
  for (auto& row : out.tables) {
    for (auto& t : row) {
      t.cols = ks.size();
      t.data.assign(ms.size() * ks.size(), Complex{});
    }
  }

  // phi[l * (top+1) + m] = phi_m(x_i + s_l / 2); phi_k(x_i - s_l/2) is the entry at -l.
  std::vector<double> phi(static_cast<std::size_t>(ns) * static_cast<std::size_t>(top + 1));
  std::vector<Complex> g_sum(nq);
  std::vector<double> xf(np);
  const double prefactor = grid.ds / (2.0 * std::numbers::pi * h);
  for (std::size_t i = 0; i < grid.x.nodes.size(); ++i) {
    const double x = grid.x.nodes[i];
    for (int l = 0; l < ns; ++l) {
      const double s = (l - grid.half_s) * grid.ds;
      hermite_eval_all(h, x + 0.5 * s, std::span<double>(&phi[static_cast<std::size_t>(l) * (top + 1)], top + 1));
    }
    for (std::size_t f = 0; f < np; ++f) xf[f] = grid.x.weights[i] * x_factors[f](x) * prefactor;
    for (std::size_t a = 0; a < ms.size(); ++a) {
      for (std::size_t b = 0; b < ks.size(); ++b) {
        std::fill(g_sum.begin(), g_sum.end(), Complex{});
        double mass = 0.0;
        for (int l = 0; l < ns; ++l) {
          const double f = phi[static_cast<std::size_t>(l) * (top + 1) + ms[a]] *
                           phi[static_cast<std::size_t>(ns - 1 - l) * (top + 1) + ks[b]];
          if (f == 0.0) continue;
          mass += std::abs(f);
          for (std::size_t g = 0; g < nq; ++g) g_sum[g] += f * xi_hat[g][static_cast<std::size_t>(l)];
        }
        for (std::size_t f = 0; f < np; ++f) {
          out.abs_mass += std::abs(xf[f]) * mass;
          for (std::size_t g = 0; g < nq; ++g) out.tables[f][g].at(a, b) += xf[f] * g_sum[g];
        }
      }
    }
  }
  return out;
}

std::vector<int> distinct_levels(const FockState& u) {
  std::set<int> s;
  for (const auto& [alpha, amp] : u.coeffs()) {
    for (int e : alpha.entries()) s.insert(e);
  }
  return {s.begin(), s.end()};
}

std::map<int, std::size_t> positions(const std::vector<int>& levels) {
  std::map<int, std::size_t> pos;
  for (std::size_t i = 0; i < levels.size(); ++i) pos[levels[i]] = i;
  return pos;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// sum_{alpha in u, beta in v} u_alpha conj(v_beta) prod_j table_j(alpha_j, beta_j)
template <class TableFor>
Complex contract(const FockState& u, const FockState& v, const std::map<int, std::size_t>& mpos,
                 const std::map<int, std::size_t>& kpos, TableFor&& table_for) {
  Complex sum{};
  for (const auto& [alpha, ua] : u.coeffs()) {
    for (const auto& [beta, vb] : v.coeffs()) {
      Complex prod = ua * std::conj(vb);
      for (std::size_t j = 0; j < u.dim() && prod != Complex{}; ++j) {
        prod *= table_for(j).at(mpos.at(alpha[j]), kpos.at(beta[j]));
      }
      sum += prod;
    }
  }
  return sum;
}

Complex poly_on_grid(const PolySymbol& a, const FockState& u, const FockState& v, double refinement) {
  const double h = u.hbar();
  const std::vector<int> ms = distinct_levels(u);
  const std::vector<int> ks = distinct_levels(v);
  if (ms.empty() || ks.empty() || a.empty()) return {};

  int per_coord = 0;
  for (const auto& [key, c] : a.terms()) {
    for (std::size_t j = 0; j < a.dim(); ++j) per_coord = std::max(per_coord, key.beta[j] + key.gamma[j]);
  }
  const int top = std::max(ms.back(), ks.back());
  const Grid grid = make_grid(h, top, per_coord, 0.0, refinement);

  std::vector<Factor> xs;
  std::vector<Factor> xis;
  for (int p = 0; p <= per_coord; ++p) {
    xs.emplace_back([p](double x) { return std::pow(x, p); });
    xis.emplace_back([p](double xi) { return std::pow(xi, p); });
  }
  const OneDimTables raw = one_dim_tables(grid, ms, ks, xs, xis);

  // (x - i xi)^b (x + i xi)^c = sum e_pq x^p xi^q
  std::map<std::pair<int, int>, Table> by_exponents;
  auto table_for_exponents = [&](int b, int c) -> const Table& {
    auto key = std::make_pair(b, c);
    if (auto it = by_exponents.find(key); it != by_exponents.end()) return it->second;
    Table t;
    t.cols = ks.size();
    t.data.assign(ms.size() * ks.size(), Complex{});
    const Complex minus_i{0.0, -1.0};
    const Complex plus_i{0.0, 1.0};
    for (int r = 0; r <= b; ++r) {
      for (int s = 0; s <= c; ++s) {
        const Complex e = binomial(b, r) * binomial(c, s) * std::pow(minus_i, r) * std::pow(plus_i, s);
        const auto& src = raw.tables[static_cast<std::size_t>(b + c - r - s)][static_cast<std::size_t>(r + s)];
        for (std::size_t idx = 0; idx < t.data.size(); ++idx) t.data[idx] += e * src.data[idx];
      }
    }
    return by_exponents.emplace(key, std::move(t)).first->second;
  };

  const auto mpos = positions(ms);
  const auto kpos = positions(ks);
  Complex total{};
  for (const auto& [key, c] : a.terms()) {
    std::vector<const Table*> per_j;
    for (std::size_t j = 0; j < a.dim(); ++j) per_j.push_back(&table_for_exponents(key.beta[j], key.gamma[j]));
    total += c * contract(u, v, mpos, kpos, [&](std::size_t j) -> const Table& { return *per_j[j]; });
  }
  return total;
}

struct BumpGridValue {
  Complex value;
  double abs_mass;
};

BumpGridValue bump_on_grid(const BumpSymbol& a, const FockState& u, const FockState& v, double refinement) {
  const double h = u.hbar();
  const std::vector<int> ms = distinct_levels(u);
  const std::vector<int> ks = distinct_levels(v);
  if (ms.empty() || ks.empty()) return {{}, 0.0};
  const int top = std::max(ms.back(), ks.back());
  const Grid grid = make_grid(h, top, 0, a.width, refinement);
  const double w2 = a.width * a.width;

  std::vector<Table> per_j;
  double mass = 1.0;
  for (std::size_t j = 0; j < a.dim(); ++j) {
    const double cx = a.center.x[static_cast<Eigen::Index>(j)];
    const double cxi = a.center.xi[static_cast<Eigen::Index>(j)];
    OneDimTables t = one_dim_tables(grid, ms, ks, {[cx, w2](double x) { return std::exp(-(x - cx) * (x - cx) / w2); }},
                                    {[cxi, w2](double xi) { return std::exp(-(xi - cxi) * (xi - cxi) / w2); }});
    mass *= t.abs_mass;
    per_j.push_back(std::move(t.tables[0][0]));
  }
  const Complex value =
      a.amplitude * contract(u, v, positions(ms), positions(ks), [&](std::size_t j) -> const Table& { return per_j[j]; });
  return {value, std::abs(a.amplitude) * mass};
}

template <class OnGrid>
QuadratureResult validated(OnGrid&& on_grid, const QuadratureSpec& spec, const char* what) {
  if (!(spec.refinement >= 1.0)) throw std::invalid_argument("QuadratureSpec: refinement must be >= 1");
  const Complex base = on_grid(spec.refinement);
  if (!spec.validate) return {base, 0.0};
  const Complex refined = on_grid(2.0 * spec.refinement);
  const double change = std::abs(refined - base);
  if (!(change <= spec.tolerance)) {
    throw QuadratureError(fmt::format(
        "{}: grid not converged (doubling changed the value by {:.3e} > {:.3e}; base {:.12g}{:+.12g}i, refined "
        "{:.12g}{:+.12g}i). Increase QuadratureSpec::refinement.",
        what, change, spec.tolerance, base.real(), base.imag(), refined.real(), refined.imag()));
  }
  return {refined, change};
}

}  // namespace

QuadratureResult quadrature_expectation_detailed(const PolySymbol& a, const FockState& u, const FockState& v,
                                                 const QuadratureSpec& spec) {
  require_compatible(u, v, "quadrature_expectation");
  if (a.dim() != u.dim()) throw std::invalid_argument("quadrature_expectation: symbol dimension mismatch");
  return validated([&](double r) { return poly_on_grid(a, u, v, r); }, spec, "quadrature_expectation");
}

QuadratureResult quadrature_expectation_detailed(const BumpSymbol& a, const FockState& u, const FockState& v,
                                                 const QuadratureSpec& spec) {
  require_compatible(u, v, "quadrature_expectation");
  if (a.dim() != u.dim()) throw std::invalid_argument("quadrature_expectation: symbol dimension mismatch");
  return validated([&](double r) { return bump_on_grid(a, u, v, r).value; }, spec, "quadrature_expectation");
}

Complex quadrature_expectation(const PolySymbol& a, const FockState& u, const FockState& v, const QuadratureSpec& spec) {
  return quadrature_expectation_detailed(a, u, v, spec).value;
}

Complex quadrature_expectation(const BumpSymbol& a, const FockState& u, const FockState& v, const QuadratureSpec& spec) {
  return quadrature_expectation_detailed(a, u, v, spec).value;
}

MicrolocalEstimate microlocal_norm(const BumpSymbol& a, const FockState& u, const QuadratureSpec& spec) {
  if (a.dim() != u.dim()) throw std::invalid_argument("microlocal_norm: symbol dimension mismatch");
  if (!u.homogeneous_level()) throw std::invalid_argument("microlocal_norm: state must be level-homogeneous");
  if (!(a.distance_to_sphere() > 3.0 * a.width)) {
    throw std::invalid_argument(fmt::format(
        "microlocal_norm: bump overlaps the energy sphere (distance {:.3g} <= 3 * width {:.3g})",
        a.distance_to_sphere(), a.width));
  }
  const BumpSymbol square = moyal_square(a, u.hbar());
  double mass = 0.0;
  const QuadratureResult r = validated(
      [&](double ref) {
        BumpGridValue g = bump_on_grid(square, u, u, ref);
        mass = g.abs_mass;
        return g.value;
      },
      spec, "microlocal_norm");
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * mass;
  MicrolocalEstimate out;
  out.value = std::sqrt(std::max(r.value.real(), 0.0));
  out.resolution = std::sqrt(r.doubling_change + floor);
  return out;
}

}  // namespace osclab
