#pragma once

#include <boost/container/small_vector.hpp>

#include <compare>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>

namespace osclab {

using Complex = std::complex<double>;

/// Occupation numbers (alpha_1, ..., alpha_d) of a d-dimensional Fock basis state.
class MultiIndex {
 public:
  using Storage = boost::container::small_vector<int, 4>;

  MultiIndex() = default;
  explicit MultiIndex(std::size_t dim);
  MultiIndex(std::initializer_list<int> entries);
  explicit MultiIndex(Storage entries);

  std::size_t dim() const { return entries_.size(); }
  int level() const { return level_; }
  int operator[](std::size_t j) const { return entries_[j]; }
  const Storage& entries() const { return entries_; }

  /// Copy with entry j changed by delta; throws if the entry would go negative.
  MultiIndex shifted(std::size_t j, int delta) const;

  /// (n, 0, ..., 0)
  static MultiIndex axis(std::size_t dim, int n);

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.entries_ == b.entries_; }
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b);

 private:
  Storage entries_;
  int level_ = 0;
};

/// Finite superposition of Fock basis states |alpha> at a fixed semiclassical parameter.
class FockState {
 public:
  using Coefficients = std::map<MultiIndex, Complex>;

  FockState(std::size_t dim, double hbar);
  FockState(std::size_t dim, double hbar, Coefficients coeffs);

  static FockState basis(const MultiIndex& alpha, double hbar);

  std::size_t dim() const { return dim_; }
  double hbar() const { return hbar_; }
  const Coefficients& coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }

  Complex coefficient(const MultiIndex& alpha) const;
  /// Accumulates amplitude on alpha.
  void add(const MultiIndex& alpha, Complex amplitude);

  double norm_squared() const;
  double norm() const;
  bool is_normalized(double tol = 1e-12) const;
  /// The common level when every stored multi-index has the same level.
  std::optional<int> homogeneous_level() const;
  std::size_t count_nonzero(double tol = 0.0) const;

  FockState normalized() const;
  FockState scaled(Complex factor) const;
  FockState& operator+=(const FockState& other);
  FockState& operator-=(const FockState& other);

 private:
  void check_key(const MultiIndex& alpha) const;

  std::size_t dim_;
  double hbar_;
  Coefficients coeffs_;
};

FockState operator+(FockState a, const FockState& b);
FockState operator-(FockState a, const FockState& b);

/// h_n = 1/(2n+d), plus an optional additive perturbation for robustness runs.
double hbar_schedule(int n, int d, double slack = 0.0);

/// Oscillator eigenvalue (2|alpha| + d) h of |alpha>.
double eigenvalue(const MultiIndex& alpha, double h);

enum class Ladder { creation, annihilation };

/// Semiclassical creation/annihilation on coordinate j (0-based):
/// A_j^* |..a_j..> = sqrt(2h(a_j+1)) |..a_j+1..>, A_j |..a_j..> = sqrt(2h a_j) |..a_j-1..>.
FockState ladder_apply(Ladder kind, std::size_t coordinate, const FockState& state);

/// f_n = v_n (x) v_0 (x) ... (x) v_0 at h_n = 1/(2n+d).
FockState reference_state(int n, int d, double slack = 0.0);

/// sum_alpha u_alpha conj(v_alpha); throws on dimension or hbar mismatch.
Complex inner_product(const FockState& u, const FockState& v);

/// Throws std::invalid_argument unless u and v live in the same space.
void require_compatible(const FockState& u, const FockState& v, const char* where);

}  // namespace osclab
