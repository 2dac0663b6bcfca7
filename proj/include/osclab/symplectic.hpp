#pragma once

#include <Eigen/Dense>

#include <complex>
#include <random>

namespace osclab {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Phase-space point z = (x, xi) in R^{2d}. Complex coordinate w = x + i xi.
struct PhasePoint {
  RealVector x;
  RealVector xi;

  std::size_t dim() const { return static_cast<std::size_t>(x.size()); }
  double norm_squared() const { return x.squaredNorm() + xi.squaredNorm(); }
  ComplexVector complex() const;
  static PhasePoint from_complex(const ComplexVector& w);
};

/// Element of the ortho-symplectic group, stored by the blocks of [[A, B], [-B, A]].
///
/// The group is identified with U(d) through U = A + iB. Its action on phase
/// space is w -> U w on the complex coordinate w = x + i xi, which in real
/// coordinates is the matrix [[A, -B], [B, A]] (see `phase_space_matrix`).
class OrthoSymplectic {
 public:
  /// Validates the block identities at `tol`.
  OrthoSymplectic(RealMatrix a, RealMatrix b, double tol = 1e-10);

  static OrthoSymplectic identity(std::size_t d);

  std::size_t dim() const { return static_cast<std::size_t>(a_.rows()); }
  const RealMatrix& a() const { return a_; }
  const RealMatrix& b() const { return b_; }

  /// [[A, B], [-B, A]]
  RealMatrix block_matrix() const;
  /// Real 2d x 2d matrix of the phase-space action on (x, xi).
  RealMatrix phase_space_matrix() const;

  PhasePoint act(const PhasePoint& z) const;
  OrthoSymplectic inverse() const;

  friend OrthoSymplectic operator*(const OrthoSymplectic& g, const OrthoSymplectic& h);

 private:
  struct Unchecked {};
  OrthoSymplectic(RealMatrix a, RealMatrix b, Unchecked);
  RealMatrix a_;
  RealMatrix b_;
  friend OrthoSymplectic from_unitary(const ComplexMatrix& u);
};

/// True iff m = [[A, B], [-B, A]] within tol, A A^T + B B^T = I and A B^T symmetric.
bool is_ortho_symplectic(const RealMatrix& m, double tol);

ComplexMatrix to_unitary(const OrthoSymplectic& g);
/// Requires |U U^dagger - I|_max <= 1e-10.
OrthoSymplectic from_unitary(const ComplexMatrix& u);

/// Hamiltonian flow of |x|^2 + |xi|^2 at time t (period pi): w(t) = exp(-2it) w0.
PhasePoint flow(double t, const PhasePoint& z);
/// The group element realizing flow(t, .).
OrthoSymplectic flow_map(double t, std::size_t d);

/// Closed trajectory of the flow on the unit sphere, represented by one point on it.
class Orbit {
 public:
  static constexpr double kEqualityTol = 1e-10;

  const PhasePoint& generator() const { return generator_; }
  const ComplexVector& w0() const { return w0_; }
  std::size_t dim() const { return generator_.dim(); }

  /// |<w0', w0>| >= 1 - tol, i.e. same great circle.
  bool same_as(const Orbit& other, double tol = kEqualityTol) const;
  friend bool operator==(const Orbit& a, const Orbit& b) { return a.same_as(b); }

 private:
  explicit Orbit(PhasePoint generator);
  PhasePoint generator_;
  ComplexVector w0_;
  friend Orbit orbit_through(const PhasePoint& z);
};

/// Renormalizes z onto the unit sphere; throws on the zero vector.
Orbit orbit_through(const PhasePoint& z);

/// The reference orbit C_1 through (e_1, 0).
Orbit reference_orbit(std::size_t d);

/// Deterministic g with to_unitary(g) e_1 = target.w0(): a Householder
/// reflection completing the generator to a unitary basis.
OrthoSymplectic transporter(const Orbit& target);

/// Nullity of the tangent constraints A N^T - B M^T symmetric, A M^T + B N^T
/// skew, on pairs (M, N); expected d^2.
int tangent_dimension_check(const OrthoSymplectic& g);

/// Real dimension of {M Hermitian q x q : M u = 0}; expected (q-1)^2.
int hermitian_annihilator_dim(const ComplexVector& u);

/// Haar-distributed unitary via QR of a complex Gaussian matrix with phase fix.
ComplexMatrix haar_unitary(std::size_t d, std::mt19937_64& rng);
OrthoSymplectic random_ortho_symplectic(std::size_t d, std::mt19937_64& rng);
/// Uniform point on S^{2d-1}.
PhasePoint random_sphere_point(std::size_t d, std::mt19937_64& rng);

}  // namespace osclab
