#include "osclab/fock.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace osclab {

MultiIndex::MultiIndex(std::size_t dim) : entries_(dim, 0) {}

MultiIndex::MultiIndex(std::initializer_list<int> entries) : MultiIndex(Storage(entries)) {}

MultiIndex::MultiIndex(Storage entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) throw std::invalid_argument("MultiIndex: negative occupation number");
  }
  level_ = std::accumulate(entries_.begin(), entries_.end(), 0);
}

MultiIndex MultiIndex::shifted(std::size_t j, int delta) const {
  if (j >= entries_.size()) throw std::out_of_range("MultiIndex::shifted: coordinate out of range");
  if (entries_[j] + delta < 0) throw std::invalid_argument("MultiIndex::shifted: negative occupation number");
  MultiIndex out = *this;
  out.entries_[j] += delta;
  out.level_ += delta;
  return out;
}

MultiIndex MultiIndex::axis(std::size_t dim, int n) {
  if (dim == 0) throw std::invalid_argument("MultiIndex::axis: dim must be positive");
  MultiIndex out(dim);
  return out.shifted(0, n);
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
  return std::lexicographical_compare_three_way(a.entries_.begin(), a.entries_.end(), b.entries_.begin(),
                                                b.entries_.end());
}

FockState::FockState(std::size_t dim, double hbar) : dim_(dim), hbar_(hbar) {
  if (dim == 0) throw std::invalid_argument("FockState: dim must be at least 1");
  if (!(hbar > 0.0)) throw std::invalid_argument("FockState: hbar must be positive");
}

FockState::FockState(std::size_t dim, double hbar, Coefficients coeffs) : FockState(dim, hbar) {
  for (const auto& [alpha, amp] : coeffs) check_key(alpha);
  coeffs_ = std::move(coeffs);
}

FockState FockState::basis(const MultiIndex& alpha, double hbar) {
  FockState out(alpha.dim(), hbar);
  out.add(alpha, 1.0);
  return out;
}

void FockState::check_key(const MultiIndex& alpha) const {
  if (alpha.dim() != dim_) {
    throw std::invalid_argument(fmt::format("FockState: multi-index of length {} in a {}-dimensional state",
                                            alpha.dim(), dim_));
  }
}

Complex FockState::coefficient(const MultiIndex& alpha) const {
  const auto it = coeffs_.find(alpha);
  return it == coeffs_.end() ? Complex{} : it->second;
}

void FockState::add(const MultiIndex& alpha, Complex amplitude) {
  check_key(alpha);
  auto [it, inserted] = coeffs_.try_emplace(alpha, amplitude);
  if (!inserted) it->second += amplitude;
}

double FockState::norm_squared() const {
  double s = 0.0;
  for (const auto& [alpha, amp] : coeffs_) s += std::norm(amp);
  return s;
}

double FockState::norm() const { return std::sqrt(norm_squared()); }

bool FockState::is_normalized(double tol) const { return std::abs(norm_squared() - 1.0) <= tol; }

std::optional<int> FockState::homogeneous_level() const {
  std::optional<int> level;
  for (const auto& [alpha, amp] : coeffs_) {
    if (!level) {
      level = alpha.level();
    } else if (*level != alpha.level()) {
      return std::nullopt;
    }
  }
  return level;
}

std::size_t FockState::count_nonzero(double tol) const {
  return static_cast<std::size_t>(
      std::count_if(coeffs_.begin(), coeffs_.end(), [tol](const auto& kv) { return std::abs(kv.second) > tol; }));
}

FockState FockState::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("FockState::normalized: zero state");
  return scaled(1.0 / n);
}

FockState FockState::scaled(Complex factor) const {
  FockState out = *this;
  for (auto& [alpha, amp] : out.coeffs_) amp *= factor;
  return out;
}

FockState& FockState::operator+=(const FockState& other) {
  require_compatible(*this, other, "FockState::operator+=");
  for (const auto& [alpha, amp] : other.coeffs_) add(alpha, amp);
  return *this;
}

FockState& FockState::operator-=(const FockState& other) {
  require_compatible(*this, other, "FockState::operator-=");
  for (const auto& [alpha, amp] : other.coeffs_) add(alpha, -amp);
  return *this;
}

FockState operator+(FockState a, const FockState& b) { return a += b; }
FockState operator-(FockState a, const FockState& b) { return a -= b; }

void require_compatible(const FockState& u, const FockState& v, const char* where) {
  if (u.dim() != v.dim()) {
    throw std::invalid_argument(fmt::format("{}: dimension mismatch ({} vs {})", where, u.dim(), v.dim()));
  }
  if (u.hbar() != v.hbar()) {
    throw std::invalid_argument(fmt::format("{}: hbar mismatch ({:.17g} vs {:.17g})", where, u.hbar(), v.hbar()));
  }
}

double hbar_schedule(int n, int d, double slack) {
  if (n < 0) throw std::invalid_argument("hbar_schedule: n must be non-negative");
  if (d < 1) throw std::invalid_argument("hbar_schedule: d must be at least 1");
  const double h = 1.0 / (2.0 * n + d) + slack;
  if (!(h > 0.0)) throw std::invalid_argument("hbar_schedule: perturbed hbar is not positive");
  return h;
}

double eigenvalue(const MultiIndex& alpha, double h) {
  return (2.0 * alpha.level() + static_cast<double>(alpha.dim())) * h;
}

FockState ladder_apply(Ladder kind, std::size_t coordinate, const FockState& state) {
  if (coordinate >= state.dim()) throw std::out_of_range("ladder_apply: coordinate out of range");
  const double two_h = 2.0 * state.hbar();
  FockState out(state.dim(), state.hbar());
  for (const auto& [alpha, amp] : state.coeffs()) {
    const int k = alpha[coordinate];
    if (kind == Ladder::creation) {
      out.add(alpha.shifted(coordinate, 1), std::sqrt(two_h * (k + 1)) * amp);
    } else if (k > 0) {
      out.add(alpha.shifted(coordinate, -1), std::sqrt(two_h * k) * amp);
    }
  }
  return out;
}

FockState reference_state(int n, int d, double slack) {
  const double h = hbar_schedule(n, d, slack);
  return FockState::basis(MultiIndex::axis(static_cast<std::size_t>(d), n), h);
}

Complex inner_product(const FockState& u, const FockState& v) {
  require_compatible(u, v, "inner_product");
  Complex s{};
  const auto& small = u.size() <= v.size() ? u.coeffs() : v.coeffs();
  const bool u_small = u.size() <= v.size();
  for (const auto& [alpha, amp] : small) {
    if (u_small) {
      s += amp * std::conj(v.coefficient(alpha));
    } else {
      s += u.coefficient(alpha) * std::conj(amp);
    }
  }
  return s;
}

}  // namespace osclab
