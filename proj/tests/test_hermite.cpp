#include "osclab/hermite.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace osclab;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

// u_n = P_n(x) exp(-x^2/2h) with P_{n+1} = 2x P_n - h P_n' (from A* = -h d/dx + x),
// normalized through the moments int x^{2m} exp(-x^2/h) dx = Gamma(m + 1/2) h^{m + 1/2}.
class LadderOracle {
 public:
  LadderOracle(int n, double h) : h_(h) {
    std::vector<Big> p{Big(1)};
    for (int k = 0; k < n; ++k) {
      std::vector<Big> next(p.size() + 1, Big(0));
      for (std::size_t i = 0; i < p.size(); ++i) {
        next[i + 1] += 2 * p[i];
        if (i > 0) next[i - 1] -= h_ * Big(static_cast<int>(i)) * p[i];
      }
      p = std::move(next);
    }
    coeffs_ = p;
    Big norm2 = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < p.size(); ++j) {
        if ((i + j) % 2 != 0) continue;
        const Big m = Big(static_cast<int>((i + j) / 2));
        norm2 += p[i] * p[j] * boost::multiprecision::tgamma(m + Big(0.5)) * boost::multiprecision::pow(h_, m + Big(0.5));
      }
    }
    inv_norm_ = 1 / boost::multiprecision::sqrt(norm2);
  }

  double operator()(double x) const {
    Big bx = x;
    Big acc = 0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * bx + coeffs_[i];
    return static_cast<double>(acc * boost::multiprecision::exp(-bx * bx / (2 * h_)) * inv_norm_);
  }

 private:
  Big h_;
  std::vector<Big> coeffs_;
  Big inv_norm_;
};

}  // namespace

TEST(Hermite, GroundStateAtOrigin) { EXPECT_NEAR(hermite_eval(0, 1.0, 0.0), std::pow(std::numbers::pi, -0.25), 1e-15); }

TEST(Hermite, OddLevelsVanishAtOrigin) {
  for (double h : {0.01, 0.3, 1.0, 5.0}) {
    EXPECT_EQ(hermite_eval(1, h, 0.0), 0.0);
    EXPECT_EQ(hermite_eval(7, h, 0.0), 0.0);
  }
}

TEST(Hermite, EvalAllMatchesSingle) {
  std::vector<double> all(30);
  hermite_eval_all(0.07, 0.4, all);
  for (int n = 0; n < 30; ++n) EXPECT_DOUBLE_EQ(all[static_cast<std::size_t>(n)], hermite_eval(n, 0.07, 0.4));
}

TEST(Hermite, UnderflowReturnsZero) {
  EXPECT_EQ(hermite_eval(3, 0.01, 50.0), 0.0);
  EXPECT_EQ(hermite_eval(300, 1e-3, -40.0), 0.0);
  EXPECT_FALSE(std::isnan(hermite_eval(500, 1e-4, 3.0)));
}

TEST(Hermite, RejectsNonPositiveH) { EXPECT_THROW(hermite_eval(1, 0.0, 0.0), std::invalid_argument); }

TEST(Hermite, RecurrenceMatchesHighPrecisionLadder) {
  for (double h : {1.0, 0.05}) {
    for (int n : {0, 1, 2, 5, 10, 20, 35, 50}) {
      const LadderOracle oracle(n, h);
      const double turning = std::sqrt((2.0 * n + 1.0) * h);
      double scale = 0.0;
      std::vector<std::pair<double, double>> samples;
      for (int k = -40; k <= 40; ++k) {
        const double x = 1.3 * turning * k / 40.0 + 0.0123 * std::sqrt(h);
        samples.emplace_back(x, oracle(x));
        scale = std::max(scale, std::abs(samples.back().second));
      }
      for (const auto& [x, ref] : samples) {
        const double got = hermite_eval(n, h, x);
        // Relative 1e-8, measured against the function's scale near its zeros.
        EXPECT_LE(std::abs(got - ref), 1e-8 * std::max(std::abs(ref), 1e-3 * scale)) << "n=" << n << " h=" << h << " x=" << x;
      }
    }
  }
}

TEST(GaussHermite, NormalizationOfEachLevel) {
  for (double h : {1.0, 0.1, 1.0 / 41.0}) {
    for (int n : {0, 1, 4, 13, 40}) {
      const PositionRule rule = position_rule(n + 1, h);
      double s = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * std::pow(hermite_eval(n, h, rule.nodes[k]), 2);
      EXPECT_NEAR(s, 1.0, 1e-10) << "n=" << n << " h=" << h;
    }
  }
}

TEST(GaussHermite, Orthonormality) {
  const double h = 0.2;
  for (int m = 0; m <= 12; ++m) {
    for (int n = 0; n <= 12; ++n) {
      const PositionRule rule = position_rule(m + n + 1, h);
      double s = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        s += rule.weights[k] * hermite_eval(m, h, rule.nodes[k]) * hermite_eval(n, h, rule.nodes[k]);
      }
      EXPECT_NEAR(s, m == n ? 1.0 : 0.0, 1e-10) << m << "," << n;
    }
  }
}

TEST(GaussHermite, IntegratesGaussianMoments) {
  const GaussHermiteRule rule = gauss_hermite(20);
  double w0 = 0.0;
  double w2 = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    w0 += rule.weights[k];
    w2 += rule.weights[k] * rule.nodes[k] * rule.nodes[k];
  }
  EXPECT_NEAR(w0, std::sqrt(std::numbers::pi), 1e-13);
  EXPECT_NEAR(w2, std::sqrt(std::numbers::pi) / 2.0, 1e-13);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) EXPECT_NEAR(rule.nodes[k], -rule.nodes[rule.nodes.size() - 1 - k], 1e-14);
}
