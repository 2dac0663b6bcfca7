#pragma once

#include "osclab/fock.hpp"
#include "osclab/weyl.hpp"

#include <stdexcept>
#include <string>

namespace osclab {

/// Phase-space quadrature for <a^w u, v> = integral of a against the cross-Wigner
/// distribution W_{u,v}(x, xi) = (2 pi h)^-d integral u(x + s/2) conj(v(x - s/2)) exp(-i s.xi/h) ds.
///
/// Per coordinate: Gauss-Hermite nodes in x (weight exp(-x^2/h)), a uniform trapezoid
/// grid in the offset s and a uniform grid in xi. Grid sizes are chosen from h and the
/// highest occupation number; `refinement` scales node density.
struct QuadratureSpec {
  double refinement = 1.0;
  /// Largest accepted change between the grid and its doubled refinement.
  double tolerance = 1e-6;
  bool validate = true;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureResult {
  Complex value;
  /// |value(refined grid) - value(grid)|; 0 when validation is off.
  double doubling_change = 0.0;
};

QuadratureResult quadrature_expectation_detailed(const PolySymbol& a, const FockState& u, const FockState& v,
                                                 const QuadratureSpec& spec = {});
QuadratureResult quadrature_expectation_detailed(const BumpSymbol& a, const FockState& u, const FockState& v,
                                                 const QuadratureSpec& spec = {});

/// Returns the refined-grid value; throws QuadratureError when doubling the grid
/// moves the result by more than spec.tolerance.
Complex quadrature_expectation(const PolySymbol& a, const FockState& u, const FockState& v,
                               const QuadratureSpec& spec = {});
Complex quadrature_expectation(const BumpSymbol& a, const FockState& u, const FockState& v,
                               const QuadratureSpec& spec = {});

struct MicrolocalEstimate {
  double value = 0.0;
  /// Smallest value distinguishable from zero: sqrt of the expectation's absolute
  /// error bound (grid-doubling change plus a rounding floor).
  double resolution = 0.0;
};

/// |a^w u| = sqrt(<(a # a)^w u, u>) with the exact Moyal square of the bump.
/// Requires a level-homogeneous u and a bump farther than 3 widths from the unit sphere.
MicrolocalEstimate microlocal_norm(const BumpSymbol& a, const FockState& u, const QuadratureSpec& spec = {});

}  // namespace osclab
