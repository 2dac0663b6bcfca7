#pragma once

#include "osclab/fock.hpp"
#include "osclab/symplectic.hpp"

#include <map>
#include <string>
#include <vector>

namespace osclab {

/// Exponents of conj(w)^beta w^gamma.
struct MonomialKey {
  MultiIndex beta;
  MultiIndex gamma;

  int degree() const { return beta.level() + gamma.level(); }
  friend bool operator==(const MonomialKey&, const MonomialKey&) = default;
  friend auto operator<=>(const MonomialKey&, const MonomialKey&) = default;
};

/// Polynomial observable a(x, xi) = sum c_{beta,gamma} prod_j conj(w_j)^beta_j w_j^gamma_j, w = x + i xi.
class PolySymbol {
 public:
  using Terms = std::map<MonomialKey, Complex>;

  explicit PolySymbol(std::size_t dim);
  PolySymbol(std::size_t dim, Terms terms);

  static PolySymbol constant(std::size_t dim, Complex c);
  static PolySymbol monomial(const MultiIndex& beta, const MultiIndex& gamma, Complex c = 1.0);
  /// w_j
  static PolySymbol w(std::size_t dim, std::size_t j);
  /// conj(w_j)
  static PolySymbol w_bar(std::size_t dim, std::size_t j);
  /// p = |x|^2 + |xi|^2 = sum_j |w_j|^2
  static PolySymbol energy(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  int degree() const;
  bool empty() const { return terms_.empty(); }

  void add_term(const MultiIndex& beta, const MultiIndex& gamma, Complex c);

  /// Real-valued iff c_{gamma,beta} = conj(c_{beta,gamma}).
  bool is_real(double tol = 1e-14) const;
  /// Pointwise complex conjugate of the symbol.
  PolySymbol conjugate() const;
  /// Real part (a + conj(a)) / 2.
  PolySymbol real_part() const;

  Complex evaluate(const ComplexVector& w) const;
  Complex evaluate(const PhasePoint& z) const { return evaluate(z.complex()); }

  /// The symbol w -> a(U w), expanded exactly.
  PolySymbol substitute(const ComplexMatrix& u) const;
  /// a o g for g acting by w -> U w.
  PolySymbol compose(const OrthoSymplectic& g) const { return substitute(to_unitary(g)); }
  /// a o flow(t).
  PolySymbol compose_flow(double t) const;

  PolySymbol pow(int k) const;

  PolySymbol& operator+=(const PolySymbol& other);
  PolySymbol& operator-=(const PolySymbol& other);
  PolySymbol& operator*=(Complex c);

  friend PolySymbol operator+(PolySymbol a, const PolySymbol& b) { return a += b; }
  friend PolySymbol operator-(PolySymbol a, const PolySymbol& b) { return a -= b; }
  friend PolySymbol operator*(PolySymbol a, Complex c) { return a *= c; }
  friend PolySymbol operator*(Complex c, PolySymbol a) { return a *= c; }
  friend PolySymbol operator*(const PolySymbol& a, const PolySymbol& b);

 private:
  std::size_t dim_;
  Terms terms_;
};

/// Text id of a monomial, e.g. "b1:0;g0:1" for conj(w_1) w_2.
std::string monomial_id(const MonomialKey& key);

/// a(z) = amplitude * exp(-|z - center|^2 / width^2).
struct BumpSymbol {
  PhasePoint center;
  double width = 1.0;
  double amplitude = 1.0;

  BumpSymbol(PhasePoint center, double width, double amplitude = 1.0);
  std::size_t dim() const { return center.dim(); }
  double evaluate(const PhasePoint& z) const;
  /// Euclidean distance from the center to the unit sphere.
  double distance_to_sphere() const;
};

/// Weyl symbol of a^w a^w for a Gaussian bump: again an isotropic Gaussian with the
/// same center, width^2 (1 + t^2) / 2 and amplitude^2 (1 + t^2)^(-d), t = h / width^2.
BumpSymbol moyal_square(const BumpSymbol& a, double h);

/// Weyl-ordered product of b creation and c annihilation operators in normal order:
/// sum_k coeff[k] h^k (A^*)^(b-k) A^(c-k). Built by the symmetric recursion
/// {A^* X}_W = (A^* X + X A^*)/2 using [A, A^*] = 2h.
const std::vector<double>& weyl_normal_order(int b, int c);

/// Matrix element <m + b - c| {(A^*)^b A^c}_W |m> in one coordinate; 0 when m + b - c < 0.
double weyl_factor(int b, int c, int m, double h);

/// Same matrix element by averaging over every interleaving of the operator word.
/// Reference path; cost grows like binomial(b + c, b).
double weyl_factor_by_permutations(int b, int c, int m, double h);

/// a^w(x, hD) u via Weyl ordering of each monomial.
FockState weyl_apply(const PolySymbol& a, const FockState& u);
/// a^w u through `weyl_factor_by_permutations`; limited to degree <= 10.
FockState weyl_apply_by_permutations(const PolySymbol& a, const FockState& u);

/// <a^w u, v>
Complex expectation(const PolySymbol& a, const FockState& u, const FockState& v);

}  // namespace osclab
