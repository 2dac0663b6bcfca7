#pragma once

#include <span>
#include <vector>

namespace osclab {

/// L2-normalized n-th eigenfunction of -h^2 d^2/dx^2 + x^2 evaluated at x.
///
/// This is the Hermite function psi_n(x / sqrt(h)) / h^(1/4), computed with the
/// three-term recurrence on normalized functions. The recurrence runs on a
/// rescaled mantissa with a separate log-scale, so the Gaussian factor never
/// underflows before the polynomial part has grown; the result is exactly 0
/// only when the true value is below the double range.
double hermite_eval(int n, double h, double x);

/// Fills out[k] = hermite_eval(k, h, x) for k = 0 .. out.size()-1 in one pass.
void hermite_eval_all(double h, double x, std::span<double> out);

/// Gauss-Hermite rule for the weight exp(-t^2).
///
/// `scaled_weights[i] = weights[i] * exp(nodes[i]^2)` stay representable for
/// large rules where the plain weights underflow; use them to integrate
/// integrands that already carry their own Gaussian decay.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> scaled_weights;
};

/// Golub-Welsch nodes polished by Newton steps; weights from the Christoffel
/// function of the normalized Hermite functions.
GaussHermiteRule gauss_hermite(int num_nodes);

/// Rule for integral f(x) dx over R where f carries decay ~exp(-x^2/h):
/// nodes sqrt(h)*t_i and weights sqrt(h)*scaled_weights[i].
struct PositionRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
PositionRule position_rule(int num_nodes, double h);

}  // namespace osclab
