#include "osclab/symplectic.hpp"

#include <fmt/format.h>

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace osclab {
namespace {

constexpr double kRankThreshold = 1e-8;

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void check_blocks(const RealMatrix& a, const RealMatrix& b, double tol) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() || a.rows() == 0) {
    throw std::invalid_argument("OrthoSymplectic: blocks must be square of equal positive size");
  }
  const auto d = a.rows();
  const double unit = max_abs(a * a.transpose() + b * b.transpose() - RealMatrix::Identity(d, d));
  const RealMatrix abt = a * b.transpose();
  const double sym = max_abs(abt - abt.transpose());
  if (unit > tol || sym > tol) {
    throw std::invalid_argument(
        fmt::format("OrthoSymplectic: block identities violated (|AA^T+BB^T-I| = {:.3g}, |AB^T-BA^T| = {:.3g})",
                    unit, sym));
  }
}

int nullity(const RealMatrix& constraints) {
  Eigen::JacobiSVD<RealMatrix> svd(constraints);
  const auto& s = svd.singularValues();
  const double top = s.size() == 0 ? 0.0 : s[0];
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > kRankThreshold * top) ++rank;
  }
  return static_cast<int>(constraints.cols()) - rank;
}

}  // namespace

ComplexVector PhasePoint::complex() const {
  ComplexVector w(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) w[j] = {x[j], xi[j]};
  return w;
}

PhasePoint PhasePoint::from_complex(const ComplexVector& w) { return {w.real(), w.imag()}; }

OrthoSymplectic::OrthoSymplectic(RealMatrix a, RealMatrix b, double tol) : a_(std::move(a)), b_(std::move(b)) {
  check_blocks(a_, b_, tol);
}

OrthoSymplectic::OrthoSymplectic(RealMatrix a, RealMatrix b, Unchecked) : a_(std::move(a)), b_(std::move(b)) {}

OrthoSymplectic OrthoSymplectic::identity(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return {RealMatrix::Identity(n, n), RealMatrix::Zero(n, n), Unchecked{}};
}

RealMatrix OrthoSymplectic::block_matrix() const {
  const auto d = a_.rows();
  RealMatrix m(2 * d, 2 * d);
  m << a_, b_, -b_, a_;
  return m;
}

RealMatrix OrthoSymplectic::phase_space_matrix() const {
  const auto d = a_.rows();
  RealMatrix m(2 * d, 2 * d);
  m << a_, -b_, b_, a_;
  return m;
}

PhasePoint OrthoSymplectic::act(const PhasePoint& z) const {
  if (z.dim() != dim()) throw std::invalid_argument("OrthoSymplectic::act: dimension mismatch");
  return {a_ * z.x - b_ * z.xi, b_ * z.x + a_ * z.xi};
}

OrthoSymplectic OrthoSymplectic::inverse() const {
  // U^{-1} = U^dagger = A^T - i B^T
  return {a_.transpose(), -b_.transpose(), Unchecked{}};
}

OrthoSymplectic operator*(const OrthoSymplectic& g, const OrthoSymplectic& h) {
  if (g.dim() != h.dim()) throw std::invalid_argument("OrthoSymplectic product: dimension mismatch");
  return {g.a_ * h.a_ - g.b_ * h.b_, g.a_ * h.b_ + g.b_ * h.a_, OrthoSymplectic::Unchecked{}};
}

bool is_ortho_symplectic(const RealMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("is_ortho_symplectic: matrix must be square");
  if (m.rows() % 2 != 0) throw std::invalid_argument("is_ortho_symplectic: odd dimension");
  const auto d = m.rows() / 2;
  const RealMatrix a = m.topLeftCorner(d, d);
  const RealMatrix b = m.topRightCorner(d, d);
  if (max_abs(RealMatrix(m.bottomRightCorner(d, d) - a)) > tol) return false;
  if (max_abs(RealMatrix(m.bottomLeftCorner(d, d) + b)) > tol) return false;
  const double unit = max_abs(RealMatrix(a * a.transpose() + b * b.transpose() - RealMatrix::Identity(d, d)));
  const RealMatrix abt = a * b.transpose();
  return unit <= tol && max_abs(RealMatrix(abt - abt.transpose())) <= tol;
}

ComplexMatrix to_unitary(const OrthoSymplectic& g) {
  ComplexMatrix u(g.a().rows(), g.a().cols());
  u.real() = g.a();
  u.imag() = g.b();
  return u;
}

OrthoSymplectic from_unitary(const ComplexMatrix& u) {
  if (u.rows() != u.cols() || u.rows() == 0) throw std::invalid_argument("from_unitary: matrix must be square");
  const double defect = max_abs(ComplexMatrix(u * u.adjoint() - ComplexMatrix::Identity(u.rows(), u.cols())));
  if (defect > 1e-10) throw std::invalid_argument(fmt::format("from_unitary: not unitary (defect {:.3g})", defect));
  return {u.real(), u.imag(), OrthoSymplectic::Unchecked{}};
}

PhasePoint flow(double t, const PhasePoint& z) {
  const double c = std::cos(2.0 * t);
  const double s = std::sin(2.0 * t);
  return {c * z.x + s * z.xi, c * z.xi - s * z.x};
}

OrthoSymplectic flow_map(double t, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  const Complex phase = std::polar(1.0, -2.0 * t);
  return from_unitary(ComplexMatrix::Identity(n, n) * phase);
}

Orbit::Orbit(PhasePoint generator) : generator_(std::move(generator)), w0_(generator_.complex()) {}

bool Orbit::same_as(const Orbit& other, double tol) const {
  if (dim() != other.dim()) return false;
  return std::abs(other.w0_.dot(w0_)) >= 1.0 - tol;
}

Orbit orbit_through(const PhasePoint& z) {
  if (z.x.size() != z.xi.size() || z.x.size() == 0) {
    throw std::invalid_argument("orbit_through: x and xi must have equal positive length");
  }
  const double r = std::sqrt(z.norm_squared());
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("orbit_through: zero or non-finite phase point");
  return Orbit(PhasePoint{z.x / r, z.xi / r});
}

Orbit reference_orbit(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return orbit_through(PhasePoint{RealVector::Unit(n, 0), RealVector::Zero(n)});
}

OrthoSymplectic transporter(const Orbit& target) {
  const ComplexVector& w0 = target.w0();
  const auto d = w0.size();
  // Phase of the first component; zero phase when that component vanishes.
  const Complex first = w0[0];
  const Complex phase = std::abs(first) > 0.0 ? first / std::abs(first) : Complex{1.0, 0.0};

  // Reflection H = I - 2 v v^dagger / |v|^2 with v = phase e_1 - w0 maps phase e_1 to w0
  // because <phase e_1, w0> is real.
  ComplexVector v = -w0;
  v[0] += phase;
  ComplexMatrix u = ComplexMatrix::Identity(d, d);
  const double vv = v.squaredNorm();
  if (vv > 1e-30) u -= (2.0 / vv) * v * v.adjoint();
  u.col(0) *= phase;
  u.col(0) = w0;
  return from_unitary(u);
}

int tangent_dimension_check(const OrthoSymplectic& g) {
  const auto d = static_cast<Eigen::Index>(g.dim());
  const RealMatrix& a = g.a();
  const RealMatrix& b = g.b();
  const Eigen::Index unknowns = 2 * d * d;
  RealMatrix constraints(2 * d * d, unknowns);
  for (Eigen::Index col = 0; col < unknowns; ++col) {
    RealMatrix m = RealMatrix::Zero(d, d);
    RealMatrix n = RealMatrix::Zero(d, d);
    const Eigen::Index k = col % (d * d);
    (col < d * d ? m : n)(k / d, k % d) = 1.0;
    const RealMatrix sym_part = a * n.transpose() - b * m.transpose();
    const RealMatrix skew_part = a * m.transpose() + b * n.transpose();
    const RealMatrix c1 = sym_part - sym_part.transpose();
    const RealMatrix c2 = skew_part + skew_part.transpose();
    constraints.col(col) << c1.reshaped(), c2.reshaped();
  }
  return nullity(constraints);
}

int hermitian_annihilator_dim(const ComplexVector& u) {
  const auto q = u.size();
  if (q < 2) throw std::invalid_argument("hermitian_annihilator_dim: need q >= 2");
  if (u.norm() == 0.0) throw std::invalid_argument("hermitian_annihilator_dim: zero vector");
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<std::size_t>(q * q));
  for (Eigen::Index j = 0; j < q; ++j) {
    ComplexMatrix e = ComplexMatrix::Zero(q, q);
    e(j, j) = 1.0;
    basis.push_back(e);
  }
  for (Eigen::Index j = 0; j < q; ++j) {
    for (Eigen::Index k = j + 1; k < q; ++k) {
      ComplexMatrix re = ComplexMatrix::Zero(q, q);
      re(j, k) = re(k, j) = 1.0;
      ComplexMatrix im = ComplexMatrix::Zero(q, q);
      im(j, k) = Complex{0.0, 1.0};
      im(k, j) = Complex{0.0, -1.0};
      basis.push_back(re);
      basis.push_back(im);
    }
  }
  RealMatrix constraints(2 * q, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t c = 0; c < basis.size(); ++c) {
    const ComplexVector mu = basis[c] * u;
    constraints.col(static_cast<Eigen::Index>(c)) << mu.real(), mu.imag();
  }
  return nullity(constraints);
}

ComplexMatrix haar_unitary(std::size_t d, std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix z(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) z(i, j) = Complex{normal(rng), normal(rng)};
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex rjj = r(j, j);
    if (std::abs(rjj) > 0.0) q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

OrthoSymplectic random_ortho_symplectic(std::size_t d, std::mt19937_64& rng) {
  return from_unitary(haar_unitary(d, rng));
}

PhasePoint random_sphere_point(std::size_t d, std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  std::normal_distribution<double> normal(0.0, 1.0);
  RealVector x(n);
  RealVector xi(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    x[j] = normal(rng);
    xi[j] = normal(rng);
  }
  const double r = std::sqrt(x.squaredNorm() + xi.squaredNorm());
  return {x / r, xi / r};
}

}  // namespace osclab
