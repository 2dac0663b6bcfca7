#include "osclab/metaplectic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

namespace osclab {
namespace {

constexpr int kExactFactorialLimit = 170;

const std::array<double, kExactFactorialLimit + 1>& factorials() {
  static const auto table = [] {
    std::array<double, kExactFactorialLimit + 1> t{};
    t[0] = 1.0;
    for (int k = 1; k <= kExactFactorialLimit; ++k) t[k] = t[k - 1] * k;
    return t;
  }();
  return table;
}

// log of prod_j alpha_j!
double log_multi_factorial(const MultiIndex& alpha) {
  double s = 0.0;
  for (int a : alpha.entries()) s += std::lgamma(a + 1.0);
  return s;
}

// sqrt(n! / alpha!) for |alpha| = n
double sqrt_multinomial(const MultiIndex& alpha) {
  const int n = alpha.level();
  if (n <= kExactFactorialLimit) {
    double denom = 1.0;
    for (int a : alpha.entries()) denom *= factorials()[a];
    return std::sqrt(factorials()[n] / denom);
  }
  return std::exp(0.5 * (std::lgamma(n + 1.0) - log_multi_factorial(alpha)));
}

void enumerate_levels(std::size_t d, std::size_t j, int remaining, MultiIndex::Storage& cur,
                      std::vector<MultiIndex>& out) {
  if (j + 1 == d) {
    cur[j] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    cur[j] = k;
    enumerate_levels(d, j + 1, remaining - k, cur, out);
  }
}

}  // namespace

std::vector<MultiIndex> level_indices(std::size_t d, int level) {
  if (d == 0) throw std::invalid_argument("level_indices: d must be positive");
  if (level < 0) return {};
  std::vector<MultiIndex> out;
  MultiIndex::Storage cur(d, 0);
  enumerate_levels(d, 0, level, cur, out);
  std::reverse(out.begin(), out.end());
  return out;
}

TransportedState transport_reference(int n, const OrthoSymplectic& g, double slack) {
  if (n < 0) throw std::invalid_argument("transport_reference: n must be non-negative");
  const std::size_t d = g.dim();
  const double h = hbar_schedule(n, static_cast<int>(d), slack);
  const ComplexMatrix u = to_unitary(g);
  const ComplexVector column = u.col(0);

  FockState::Coefficients coeffs;
  for (const MultiIndex& alpha : level_indices(d, n)) {
    Complex c = sqrt_multinomial(alpha);
    for (std::size_t j = 0; j < d && c != Complex{}; ++j) {
      const int a = alpha[j];
      if (a == 0) continue;
      const Complex uj = column[static_cast<Eigen::Index>(j)];
      if (uj == Complex{}) {
        c = 0.0;
      } else {
        c *= std::polar(std::pow(std::abs(uj), a), a * std::arg(uj));
      }
    }
    if (c != Complex{}) coeffs.emplace(alpha, c);
  }
  return {FockState(d, h, std::move(coeffs)), n, g};
}

FockState transport_state(const OrthoSymplectic& g, const FockState& u) {
  if (g.dim() != u.dim()) throw std::invalid_argument("transport_state: dimension mismatch");
  const std::size_t d = u.dim();
  const ComplexMatrix mat = to_unitary(g);
  FockState out(d, u.hbar());
  using Poly = std::map<MultiIndex, Complex>;
  for (const auto& [alpha, amp] : u.coeffs()) {
    // Expand prod_j (sum_k U_kj y_k)^alpha_j as a polynomial in y.
    Poly poly{{MultiIndex(d), Complex{1.0}}};
    for (std::size_t j = 0; j < d; ++j) {
      for (int e = 0; e < alpha[j]; ++e) {
        Poly next;
        for (const auto& [beta, c] : poly) {
          for (std::size_t k = 0; k < d; ++k) {
            const Complex ukj = mat(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
            if (ukj == Complex{}) continue;
            next[beta.shifted(k, 1)] += c * ukj;
          }
        }
        poly = std::move(next);
      }
    }
    // y^beta |0> = sqrt(beta! (2h)^n) |beta>; |alpha> = y^alpha |0> / sqrt(alpha! (2h)^n).
    const double log_alpha = log_multi_factorial(alpha);
    for (const auto& [beta, c] : poly) {
      out.add(beta, amp * c * std::exp(0.5 * (log_multi_factorial(beta) - log_alpha)));
    }
  }
  return out;
}

double verify_eigen(const FockState& state) {
  const FockState residual = weyl_apply(PolySymbol::energy(state.dim()), state) - state;
  return residual.norm();
}

double verify_eigen(const TransportedState& state) { return verify_eigen(state.state); }

std::pair<Complex, Complex> covariance_check(const PolySymbol& a, const OrthoSymplectic& g, const FockState& u,
                                             const FockState& v) {
  if (!u.homogeneous_level() || !v.homogeneous_level()) {
    throw std::invalid_argument("covariance_check: states must be level-homogeneous");
  }
  const Complex transported = expectation(a, transport_state(g, u), transport_state(g, v));
  const Complex substituted = expectation(a.compose(g), u, v);
  return {transported, substituted};
}

}  // namespace osclab
