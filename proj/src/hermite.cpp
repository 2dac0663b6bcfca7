#include "osclab/hermite.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace osclab {
namespace {

constexpr double kRescaleAbove = 1e150;
constexpr double kRescaleFactor = 1e-150;
const double kLogRescale = std::log(1e150);

// Recurrence in t = x / sqrt(h) on a mantissa with a running log-scale.
// Calls sink(k, psi_k(t)) for k = 0..n.
template <class Sink>
void psi_recurrence(int n, double t, Sink&& sink) {
  double log_scale = -0.5 * t * t - 0.25 * std::log(std::numbers::pi);
  double prev = 0.0;
  double cur = 1.0;
  sink(0, std::exp(log_scale));
  for (int k = 0; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * t * cur - std::sqrt(double(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescaleAbove) {
      cur *= kRescaleFactor;
      prev *= kRescaleFactor;
      log_scale += kLogRescale;
    }
    sink(k + 1, cur * std::exp(log_scale));
  }
}

// psi_{n-1}(t) and psi_n(t) up to a common positive factor.
std::pair<double, double> psi_pair_unscaled(int n, double t) {
  double prev = 0.0;
  double cur = 1.0;
  for (int k = 0; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * t * cur - std::sqrt(double(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescaleAbove) {
      cur *= kRescaleFactor;
      prev *= kRescaleFactor;
    }
  }
  return {prev, cur};
}

}  // namespace

double hermite_eval(int n, double h, double x) {
  if (n < 0) throw std::invalid_argument("hermite_eval: negative order");
  if (!(h > 0.0)) throw std::invalid_argument("hermite_eval: h must be positive");
  const double t = x / std::sqrt(h);
  double value = 0.0;
  psi_recurrence(n, t, [&](int k, double v) {
    if (k == n) value = v;
  });
  return value / std::pow(h, 0.25);
}

void hermite_eval_all(double h, double x, std::span<double> out) {
  if (!(h > 0.0)) throw std::invalid_argument("hermite_eval_all: h must be positive");
  if (out.empty()) return;
  const double t = x / std::sqrt(h);
  const double norm = std::pow(h, -0.25);
  psi_recurrence(static_cast<int>(out.size()) - 1, t, [&](int k, double v) { out[k] = v * norm; });
}

GaussHermiteRule gauss_hermite(int num_nodes) {
  if (num_nodes < 1) throw std::invalid_argument("gauss_hermite: need at least one node");
  const int n = num_nodes;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(k / 2.0);

  GaussHermiteRule rule;
  rule.nodes.resize(n);
  if (n == 1) {
    rule.nodes[0] = 0.0;
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    for (int i = 0; i < n; ++i) rule.nodes[i] = solver.eigenvalues()[i];
  }

  // Newton on psi_n, using psi_n' = sqrt(2n) psi_{n-1} - t psi_n.
  for (double& t : rule.nodes) {
    for (int iter = 0; iter < 3; ++iter) {
      const auto [pm1, p] = psi_pair_unscaled(n, t);
      const double deriv = std::sqrt(2.0 * n) * pm1 - t * p;
      if (deriv == 0.0) break;
      t -= p / deriv;
    }
  }
  // Symmetrize; the rule is exactly symmetric in exact arithmetic.
  for (int i = 0; i < n / 2; ++i) {
    const double a = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
    rule.nodes[i] = -a;
    rule.nodes[n - 1 - i] = a;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;

  rule.weights.resize(n);
  rule.scaled_weights.resize(n);
  std::vector<double> psi(n);
  for (int i = 0; i < n; ++i) {
    // Christoffel function of psi_k = p_k exp(-t^2/2): sum_k psi_k(t)^2 = exp(-t^2) sum_k p_k(t)^2.
    hermite_eval_all(1.0, rule.nodes[i], psi);
    double sum = 0.0;
    for (double v : psi) sum += v * v;
    rule.scaled_weights[i] = 1.0 / sum;
    rule.weights[i] = rule.scaled_weights[i] * std::exp(-rule.nodes[i] * rule.nodes[i]);
  }
  return rule;
}

PositionRule position_rule(int num_nodes, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("position_rule: h must be positive");
  const GaussHermiteRule rule = gauss_hermite(num_nodes);
  const double s = std::sqrt(h);
  PositionRule out;
  out.nodes.reserve(rule.nodes.size());
  out.weights.reserve(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    out.nodes.push_back(s * rule.nodes[i]);
    out.weights.push_back(s * rule.scaled_weights[i]);
  }
  return out;
}

}  // namespace osclab
