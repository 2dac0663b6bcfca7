#include "osclab/weyl.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace osclab {
namespace {

MultiIndex unit_index(std::size_t dim, std::size_t j) { return MultiIndex(dim).shifted(j, 1); }

MultiIndex add_indices(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex::Storage s(a.entries());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] += b[j];
  return MultiIndex(std::move(s));
}

void check_dim(std::size_t expected, std::size_t got, const char* where) {
  if (expected != got) throw std::invalid_argument(fmt::format("{}: dimension mismatch ({} vs {})", where, expected, got));
}

// m (m-1) ... (m-q+1)
double falling(int m, int q) {
  double r = 1.0;
  for (int i = 0; i < q; ++i) r *= static_cast<double>(m - i);
  return r;
}

// (a+1) (a+2) ... (a+p)
double rising_from(int a, int p) {
  double r = 1.0;
  for (int i = 1; i <= p; ++i) r *= static_cast<double>(a + i);
  return r;
}

template <class Factor>
FockState apply_with(const PolySymbol& a, const FockState& u, Factor&& factor) {
  check_dim(a.dim(), u.dim(), "weyl_apply");
  const double h = u.hbar();
  FockState out(u.dim(), h);
  const std::size_t d = u.dim();
  for (const auto& [key, c] : a.terms()) {
    for (const auto& [alpha, amp] : u.coeffs()) {
      double f = 1.0;
      MultiIndex::Storage target(d);
      for (std::size_t j = 0; j < d && f != 0.0; ++j) {
        const int b = key.beta[j];
        const int g = key.gamma[j];
        target[j] = alpha[j] + b - g;
        if (target[j] < 0) {
          f = 0.0;
          break;
        }
        f *= factor(b, g, alpha[j], h);
      }
      if (f == 0.0) continue;
      out.add(MultiIndex(std::move(target)), c * f * amp);
    }
  }
  return out;
}

}  // namespace

PolySymbol::PolySymbol(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("PolySymbol: dim must be at least 1");
}

PolySymbol::PolySymbol(std::size_t dim, Terms terms) : PolySymbol(dim) {
  for (const auto& [key, c] : terms) add_term(key.beta, key.gamma, c);
}

PolySymbol PolySymbol::constant(std::size_t dim, Complex c) {
  PolySymbol out(dim);
  out.add_term(MultiIndex(dim), MultiIndex(dim), c);
  return out;
}

PolySymbol PolySymbol::monomial(const MultiIndex& beta, const MultiIndex& gamma, Complex c) {
  PolySymbol out(beta.dim());
  out.add_term(beta, gamma, c);
  return out;
}

PolySymbol PolySymbol::w(std::size_t dim, std::size_t j) { return monomial(MultiIndex(dim), unit_index(dim, j)); }

PolySymbol PolySymbol::w_bar(std::size_t dim, std::size_t j) { return monomial(unit_index(dim, j), MultiIndex(dim)); }

PolySymbol PolySymbol::energy(std::size_t dim) {
  PolySymbol out(dim);
  for (std::size_t j = 0; j < dim; ++j) out.add_term(unit_index(dim, j), unit_index(dim, j), 1.0);
  return out;
}

int PolySymbol::degree() const {
  int deg = 0;
  for (const auto& [key, c] : terms_) deg = std::max(deg, key.degree());
  return deg;
}

void PolySymbol::add_term(const MultiIndex& beta, const MultiIndex& gamma, Complex c) {
  check_dim(dim_, beta.dim(), "PolySymbol::add_term");
  check_dim(dim_, gamma.dim(), "PolySymbol::add_term");
  auto [it, inserted] = terms_.try_emplace(MonomialKey{beta, gamma}, c);
  if (!inserted) it->second += c;
}

bool PolySymbol::is_real(double tol) const {
  for (const auto& [key, c] : terms_) {
    const auto it = terms_.find(MonomialKey{key.gamma, key.beta});
    const Complex partner = it == terms_.end() ? Complex{} : it->second;
    if (std::abs(partner - std::conj(c)) > tol) return false;
  }
  return true;
}

PolySymbol PolySymbol::conjugate() const {
  PolySymbol out(dim_);
  for (const auto& [key, c] : terms_) out.add_term(key.gamma, key.beta, std::conj(c));
  return out;
}

PolySymbol PolySymbol::real_part() const { return (*this + conjugate()) * Complex{0.5}; }

Complex PolySymbol::evaluate(const ComplexVector& w) const {
  check_dim(dim_, static_cast<std::size_t>(w.size()), "PolySymbol::evaluate");
  Complex sum{};
  for (const auto& [key, c] : terms_) {
    Complex term = c;
    for (std::size_t j = 0; j < dim_; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      for (int k = 0; k < key.beta[j]; ++k) term *= std::conj(w[jj]);
      for (int k = 0; k < key.gamma[j]; ++k) term *= w[jj];
    }
    sum += term;
  }
  return sum;
}

PolySymbol PolySymbol::substitute(const ComplexMatrix& u) const {
  check_dim(dim_, static_cast<std::size_t>(u.rows()), "PolySymbol::substitute");
  check_dim(dim_, static_cast<std::size_t>(u.cols()), "PolySymbol::substitute");
  // (U w)_k and its conjugate as linear symbols.
  std::vector<PolySymbol> lin;
  std::vector<PolySymbol> lin_bar;
  for (std::size_t k = 0; k < dim_; ++k) {
    PolySymbol l(dim_);
    PolySymbol lb(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      const Complex ukj = u(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
      if (ukj == Complex{}) continue;
      l.add_term(MultiIndex(dim_), unit_index(dim_, j), ukj);
      lb.add_term(unit_index(dim_, j), MultiIndex(dim_), std::conj(ukj));
    }
    lin.push_back(std::move(l));
    lin_bar.push_back(std::move(lb));
  }
  PolySymbol out(dim_);
  for (const auto& [key, c] : terms_) {
    PolySymbol term = constant(dim_, c);
    for (std::size_t k = 0; k < dim_; ++k) {
      for (int e = 0; e < key.beta[k]; ++e) term = term * lin_bar[k];
      for (int e = 0; e < key.gamma[k]; ++e) term = term * lin[k];
    }
    out += term;
  }
  return out;
}

PolySymbol PolySymbol::compose_flow(double t) const {
  // conj(w)^beta w^gamma picks up exp(2it(|beta| - |gamma|)) under w -> exp(-2it) w.
  PolySymbol out(dim_);
  for (const auto& [key, c] : terms_) {
    out.add_term(key.beta, key.gamma, c * std::polar(1.0, 2.0 * t * (key.beta.level() - key.gamma.level())));
  }
  return out;
}

PolySymbol PolySymbol::pow(int k) const {
  if (k < 0) throw std::invalid_argument("PolySymbol::pow: negative exponent");
  PolySymbol out = constant(dim_, 1.0);
  for (int i = 0; i < k; ++i) out = out * *this;
  return out;
}

PolySymbol& PolySymbol::operator+=(const PolySymbol& other) {
  check_dim(dim_, other.dim_, "PolySymbol::operator+=");
  for (const auto& [key, c] : other.terms_) add_term(key.beta, key.gamma, c);
  return *this;
}

PolySymbol& PolySymbol::operator-=(const PolySymbol& other) {
  check_dim(dim_, other.dim_, "PolySymbol::operator-=");
  for (const auto& [key, c] : other.terms_) add_term(key.beta, key.gamma, -c);
  return *this;
}

PolySymbol& PolySymbol::operator*=(Complex c) {
  for (auto& [key, coeff] : terms_) coeff *= c;
  return *this;
}

PolySymbol operator*(const PolySymbol& a, const PolySymbol& b) {
  check_dim(a.dim_, b.dim_, "PolySymbol product");
  PolySymbol out(a.dim_);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      out.add_term(add_indices(ka.beta, kb.beta), add_indices(ka.gamma, kb.gamma), ca * cb);
    }
  }
  return out;
}

std::string monomial_id(const MonomialKey& key) {
  std::string out = "b";
  for (std::size_t j = 0; j < key.beta.dim(); ++j) out += (j ? ":" : "") + std::to_string(key.beta[j]);
  out += ";g";
  for (std::size_t j = 0; j < key.gamma.dim(); ++j) out += (j ? ":" : "") + std::to_string(key.gamma[j]);
  return out;
}

BumpSymbol::BumpSymbol(PhasePoint c, double w, double amp) : center(std::move(c)), width(w), amplitude(amp) {
  if (!(width > 0.0)) throw std::invalid_argument("BumpSymbol: width must be positive");
  if (center.x.size() != center.xi.size() || center.x.size() == 0) {
    throw std::invalid_argument("BumpSymbol: center must have matching non-empty x and xi");
  }
}

double BumpSymbol::evaluate(const PhasePoint& z) const {
  const double r2 = (z.x - center.x).squaredNorm() + (z.xi - center.xi).squaredNorm();
  return amplitude * std::exp(-r2 / (width * width));
}

double BumpSymbol::distance_to_sphere() const { return std::abs(std::sqrt(center.norm_squared()) - 1.0); }

BumpSymbol moyal_square(const BumpSymbol& a, double h) {
  const double t = h / (a.width * a.width);
  const double grow = 1.0 + t * t;
  return BumpSymbol(a.center, a.width * std::sqrt(grow / 2.0),
                    a.amplitude * a.amplitude * std::pow(grow, -static_cast<double>(a.dim())));
}

const std::vector<double>& weyl_normal_order(int b, int c) {
  if (b < 0 || c < 0) throw std::invalid_argument("weyl_normal_order: negative exponent");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::vector<double>> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(b, c);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  // Start from A^c (already Weyl ordered), then b symmetric multiplications by A^*:
  // (A^* N(p,q) + N(p,q) A^*)/2 = N(p+1,q) + q h N(p,q-1).
  std::vector<double> t{1.0};
  for (int step = 0; step < b; ++step) {
    std::vector<double> next(t.size() + 1, 0.0);
    for (std::size_t k = 0; k < t.size(); ++k) {
      next[k] += t[k];
      const int q = c - static_cast<int>(k);
      if (q > 0) next[k + 1] += q * t[k];
    }
    while (next.size() > 1 && next.back() == 0.0) next.pop_back();
    t = std::move(next);
  }
  return cache.emplace(key, std::move(t)).first->second;
}

double weyl_factor(int b, int c, int m, double h) {
  if (m + b - c < 0) return 0.0;
  const auto& coeff = weyl_normal_order(b, c);
  double sum = 0.0;
  for (std::size_t kk = 0; kk < coeff.size(); ++kk) {
    const int k = static_cast<int>(kk);
    const int p = b - k;
    const int q = c - k;
    if (q > m) continue;
    const double ladder = std::sqrt(falling(m, q) * rising_from(m - q, p));
    sum += coeff[kk] * std::pow(h, k) * std::pow(2.0 * h, 0.5 * (p + q)) * ladder;
  }
  return sum;
}

double weyl_factor_by_permutations(int b, int c, int m, double h) {
  if (b < 0 || c < 0) throw std::invalid_argument("weyl_factor_by_permutations: negative exponent");
  if (m + b - c < 0) return 0.0;
  // 1 = creation, 0 = annihilation; the word acts right-to-left on |m>.
  std::vector<int> word(static_cast<std::size_t>(b + c), 0);
  std::fill(word.begin() + c, word.end(), 1);
  double total = 0.0;
  long count = 0;
  do {
    double amp = 1.0;
    int level = m;
    for (auto it = word.rbegin(); it != word.rend() && amp != 0.0; ++it) {
      if (*it == 1) {
        amp *= std::sqrt(2.0 * h * (level + 1));
        ++level;
      } else {
        amp *= std::sqrt(2.0 * h * level);
        --level;
      }
    }
    total += amp;
    ++count;
  } while (std::next_permutation(word.begin(), word.end()));
  return total / static_cast<double>(count);
}

FockState weyl_apply(const PolySymbol& a, const FockState& u) { return apply_with(a, u, weyl_factor); }

FockState weyl_apply_by_permutations(const PolySymbol& a, const FockState& u) {
  if (a.degree() > 10) throw std::invalid_argument("weyl_apply_by_permutations: degree above 10");
  return apply_with(a, u, weyl_factor_by_permutations);
}

Complex expectation(const PolySymbol& a, const FockState& u, const FockState& v) {
  require_compatible(u, v, "expectation");
  return inner_product(weyl_apply(a, u), v);
}

}  // namespace osclab
