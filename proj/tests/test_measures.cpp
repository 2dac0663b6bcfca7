#include "osclab/harness.hpp"
#include "osclab/measures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace osclab;

namespace {

PhasePoint axis_point(std::size_t d, std::size_t j) {
  PhasePoint z{RealVector::Zero(static_cast<Eigen::Index>(d)), RealVector::Zero(static_cast<Eigen::Index>(d))};
  z.x[static_cast<Eigen::Index>(j)] = 1.0;
  return z;
}

PolySymbol abs_w_squared(std::size_t d, std::size_t j) { return PolySymbol::w_bar(d, j) * PolySymbol::w(d, j); }

}  // namespace

TEST(OrbitIntegral, Examples) {
  std::mt19937_64 rng(1);
  for (std::size_t d = 1; d <= 3; ++d) {
    const OrbitMeasure m{orbit_through(random_sphere_point(d, rng))};
    EXPECT_NEAR(std::abs(orbit_integral(PolySymbol::constant(d, 1.0), m) - 1.0), 0.0, 1e-15);
    EXPECT_EQ(orbit_integral(PolySymbol::w(d, 0), m), Complex(0.0));
    EXPECT_LE(std::abs(orbit_integral_trapezoid(PolySymbol::w(d, 0), m)), 1e-15);
  }
  EXPECT_EQ(orbit_integral(abs_w_squared(2, 0), OrbitMeasure{reference_orbit(2)}), Complex(1.0));
  EXPECT_THROW(orbit_integral(PolySymbol::w(3, 0), OrbitMeasure{reference_orbit(2)}), std::invalid_argument);
}

TEST(OrbitIntegral, TrapezoidAgreesUpToDegreeEight) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 40; ++k) {
    const std::size_t d = 1 + static_cast<std::size_t>(k % 3);
    const PolySymbol a = random_poly_symbol(d, 8, 5, rng);
    const OrbitMeasure m{orbit_through(random_sphere_point(d, rng))};
    EXPECT_LE(std::abs(orbit_integral(a, m) - orbit_integral_trapezoid(a, m)), 1e-12);
  }
}

TEST(OrbitIntegral, FlowInvariance) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const std::size_t d = 1 + static_cast<std::size_t>(k % 3);
    const PolySymbol a = random_poly_symbol(d, 6, 4, rng);
    const OrbitMeasure m{orbit_through(random_sphere_point(d, rng))};
    EXPECT_LE(std::abs(orbit_integral(a.compose_flow(0.37 * k), m) - orbit_integral(a, m)), 1e-13);
  }
}

TEST(ConvexMeasure, Validation) {
  const Orbit a = orbit_through(axis_point(2, 0));
  const Orbit b = orbit_through(axis_point(2, 1));
  EXPECT_NO_THROW(ConvexMeasure({{0.5, {a}}, {0.5, {b}}}));
  EXPECT_THROW(ConvexMeasure({{0.5, {a}}, {0.4, {b}}}), std::invalid_argument);
  EXPECT_THROW(ConvexMeasure({{1.5, {a}}, {-0.5, {b}}}), std::invalid_argument);
  EXPECT_THROW(ConvexMeasure({{0.5, {a}}, {0.5, {orbit_through(flow(0.3, axis_point(2, 0)))}}}), std::invalid_argument);
  EXPECT_THROW(ConvexMeasure({{0.5, {a}}, {0.5, {orbit_through(axis_point(3, 1))}}}), std::invalid_argument);
  EXPECT_THROW(ConvexMeasure(std::vector<WeightedOrbit>{}), std::invalid_argument);
}

TEST(ConvexIntegral, Examples) {
  const Orbit a = orbit_through(axis_point(2, 0));
  const Orbit b = orbit_through(axis_point(2, 1));
  const ConvexMeasure mix({{0.5, {a}}, {0.5, {b}}});
  EXPECT_DOUBLE_EQ(convex_integral(abs_w_squared(2, 0), mix).real(), 0.5);
  EXPECT_DOUBLE_EQ(convex_integral(PolySymbol::constant(2, 1.0), mix).real(), 1.0);
  std::mt19937_64 rng(4);
  const PolySymbol s = random_poly_symbol(2, 4, 4, rng);
  EXPECT_EQ(convex_integral(s, ConvexMeasure::single(a)), orbit_integral(s, OrbitMeasure{a}));
  const PolySymbol t = random_poly_symbol(2, 4, 4, rng);
  EXPECT_LE(std::abs(convex_integral(s + t * 2.0, mix) - convex_integral(s, mix) - 2.0 * convex_integral(t, mix)), 1e-14);
}

TEST(TestFamily, GradedOrderingAndNormalization) {
  const TestFamily f = TestFamily::graded(2);
  EXPECT_EQ(f.size(), 36u);
  EXPECT_EQ(f[0].id, "b0:0;g0:0");
  int previous = 0;
  std::mt19937_64 rng(5);
  for (const auto& m : f.members()) {
    EXPECT_GE(m.symbol.degree(), previous);
    previous = m.symbol.degree();
    EXPECT_LE(m.symbol.degree(), 4);
    // Unit sup norm on the sphere: never exceeded at random points, attained at the maximizer.
    for (int k = 0; k < 50; ++k) EXPECT_LE(std::abs(m.symbol.evaluate(random_sphere_point(2, rng))), 1.0 + 1e-12);
  }
  // sup of |w_1|^2 |w_2|^2 is 1/4 at |w_1|^2 = |w_2|^2 = 1/2.
  EXPECT_NEAR(monomial_sphere_sup({MultiIndex{1, 1}, MultiIndex{1, 1}}), 0.25, 1e-15);
  EXPECT_EQ(TestFamily::graded(1).size(), 9u);
  EXPECT_EQ(TestFamily::graded(3).size(), 100u);
}

TEST(WeakStar, MetricAxioms) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 50; ++k) {
    ValueTable x(10), y(10), z(10);
    for (std::size_t i = 0; i < 10; ++i) {
      x[i] = {u(rng), u(rng)};
      y[i] = {u(rng), u(rng)};
      z[i] = {u(rng), u(rng)};
    }
    EXPECT_EQ(weak_star_distance(x, x), 0.0);
    EXPECT_EQ(weak_star_distance(x, y), weak_star_distance(y, x));
    EXPECT_GT(weak_star_distance(x, y), 0.0);
    EXPECT_LE(weak_star_distance(x, y), weak_star_distance(x, z) + weak_star_distance(z, y));
  }
}

TEST(WeakStar, SaturatedDifference) {
  for (std::size_t K : {1u, 5u, 30u}) {
    const ValueTable a(K, Complex(0.0));
    const ValueTable b(K, Complex(1.0));
    EXPECT_DOUBLE_EQ(weak_star_distance(a, b), 1.0 - std::ldexp(1.0, -static_cast<int>(K)));
  }
  EXPECT_THROW(weak_star_distance(ValueTable(3), ValueTable(4)), std::invalid_argument);
  const TestFamily f = TestFamily::graded(1);
  EXPECT_THROW(weak_star_distance(ValueTable(3), ValueTable(3), f), std::invalid_argument);
}

TEST(ApproximateInvariant, SinglePointSampler) {
  std::mt19937_64 rng(7);
  const PhasePoint p = random_sphere_point(3, rng);
  PointSampler one = [&](std::mt19937_64&) { return p; };
  const TestFamily f = TestFamily::graded(3, 1);
  for (int m : {1, 10, 100}) {
    const auto r = approximate_invariant(one, m, f, rng, value_table(f, ConvexMeasure::single(orbit_through(p))));
    ASSERT_EQ(r.measure.components().size(), 1u);
    EXPECT_EQ(r.measure.components()[0].measure.orbit, orbit_through(p));
    ASSERT_TRUE(r.distance.has_value());
    EXPECT_LE(*r.distance, 1e-14);
  }
  EXPECT_THROW(approximate_invariant(one, 0, f, rng), std::invalid_argument);
}

TEST(ApproximateInvariant, TwoOrbitWeights) {
  std::mt19937_64 rng(8);
  const auto [oa, ob] = random_separated_orbits(2, rng);
  const PhasePoint pa = oa.generator();
  const PhasePoint pb = ob.generator();
  PointSampler two = [&](std::mt19937_64& r) {
    const double t = std::uniform_real_distribution<double>(0.0, std::numbers::pi)(r);
    return flow(t, std::bernoulli_distribution(0.3)(r) ? pa : pb);
  };
  const TestFamily f = TestFamily::graded(2);
  for (int m : {100, 400, 1600}) {
    const auto r = approximate_invariant(two, m, f, rng);
    ASSERT_EQ(r.measure.components().size(), 2u);
    for (const auto& c : r.measure.components()) {
      const double target = c.measure.orbit == oa ? 0.3 : 0.7;
      EXPECT_LE(std::abs(c.weight - target), 3.0 / std::sqrt(m));
    }
  }
}

TEST(ApproximateInvariant, UniformSphere) {
  std::mt19937_64 rng(9);
  PointSampler uniform = [](std::mt19937_64& r) { return random_sphere_point(2, r); };
  const TestFamily f = TestFamily::graded(2);
  for (int m : {100, 400, 1600}) {
    const auto r = approximate_invariant(uniform, m, f, rng);
    EXPECT_LE(std::abs(convex_integral(abs_w_squared(2, 0), r.measure) - 0.5), 3.0 / std::sqrt(m));
  }
}

TEST(ApproximateInvariant, MedianDistanceShrinks) {
  // Reference: the uniform measure on S^3 integrates conj(w)^b w^g to 0 unless b = g, and
  // |w_1|^2 -> 1/2, |w_1|^4 -> 1/3, |w_1|^2|w_2|^2 -> 1/6 (Dirichlet moments).
  const TestFamily f = TestFamily::graded(2, 1);
  ValueTable reference;
  for (const auto& m : f.members()) {
    Complex v = 0.0;
    const auto& [key, c] = *m.symbol.terms().begin();
    if (key.beta == key.gamma) {
      const int a1 = key.beta[0];
      const int a2 = key.beta[1];
      // E[|w1|^{2a1} |w2|^{2a2}] = a1! a2! / (a1 + a2 + 1)!
      v = c * std::tgamma(a1 + 1.0) * std::tgamma(a2 + 1.0) / std::tgamma(a1 + a2 + 2.0);
    }
    reference.push_back(v);
  }
  PointSampler uniform = [](std::mt19937_64& r) { return random_sphere_point(2, r); };
  auto median_distance = [&](int m) {
    std::vector<double> d;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      std::mt19937_64 rng(1000 + seed);
      d.push_back(*approximate_invariant(uniform, m, f, rng, reference).distance);
    }
    std::sort(d.begin(), d.end());
    return 0.5 * (d[9] + d[10]);
  };
  const double d100 = median_distance(100);
  const double d400 = median_distance(400);
  const double d1600 = median_distance(1600);
  EXPECT_LT(d400, d100);
  EXPECT_LT(d1600, d400);
}
