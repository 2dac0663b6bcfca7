#pragma once

#include "osclab/symplectic.hpp"
#include "osclab/weyl.hpp"

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace osclab {

/// Uniform probability measure on one flow orbit.
struct OrbitMeasure {
  Orbit orbit;
};

struct WeightedOrbit {
  double weight;
  OrbitMeasure measure;
};

/// sum_i lambda_i c_i with positive weights summing to 1 (within 1e-12) on pairwise distinct orbits.
class ConvexMeasure {
 public:
  explicit ConvexMeasure(std::vector<WeightedOrbit> components);
  static ConvexMeasure single(const Orbit& orbit);

  std::size_t dim() const { return components_.front().measure.orbit.dim(); }
  const std::vector<WeightedOrbit>& components() const { return components_; }

 private:
  std::vector<WeightedOrbit> components_;
};

struct TestSymbol {
  std::string id;
  PolySymbol symbol;
};

/// Ordered test observables a_1, a_2, ... weighted 2^-k in the weak-* distance.
class TestFamily {
 public:
  explicit TestFamily(std::vector<TestSymbol> members);

  /// Every monomial conj(w)^beta w^gamma with |beta|, |gamma| <= max_each, graded by total
  /// degree then lexicographic in (beta, gamma), scaled to unit sup norm on the sphere.
  static TestFamily graded(std::size_t dim, int max_each = 2);

  std::size_t size() const { return members_.size(); }
  std::size_t dim() const { return members_.front().symbol.dim(); }
  const std::vector<TestSymbol>& members() const { return members_; }
  const TestSymbol& operator[](std::size_t k) const { return members_[k]; }

 private:
  std::vector<TestSymbol> members_;
};

/// sup over the unit sphere of |conj(w)^beta w^gamma|.
double monomial_sphere_sup(const MonomialKey& key);

Complex orbit_integral(const PolySymbol& a, const OrbitMeasure& m);
/// Trapezoid rule in t over [0, pi) on w(t) = exp(-2it) w0; nodes default to 2 deg + 1.
Complex orbit_integral_trapezoid(const PolySymbol& a, const OrbitMeasure& m, int nodes = 0);
Complex convex_integral(const PolySymbol& a, const ConvexMeasure& mu);

using ValueTable = std::vector<Complex>;
ValueTable value_table(const TestFamily& family, const ConvexMeasure& mu);

/// sum_k min(|v1_k - v2_k|, 2^-k), k = 1..K.
double weak_star_distance(const ValueTable& v1, const ValueTable& v2);
double weak_star_distance(const ValueTable& v1, const ValueTable& v2, const TestFamily& family);

using PointSampler = std::function<PhasePoint(std::mt19937_64&)>;

struct ApproximationResult {
  ConvexMeasure measure;
  std::optional<double> distance;
};

/// Empirical orbit measure of m sampled points; equal orbits are merged with summed weights.
ApproximationResult approximate_invariant(const PointSampler& sampler, int m, const TestFamily& family,
                                          std::mt19937_64& rng,
                                          const std::optional<ValueTable>& reference = std::nullopt);

}  // namespace osclab
