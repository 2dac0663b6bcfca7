#include "osclab/measures.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace osclab {

ConvexMeasure::ConvexMeasure(std::vector<WeightedOrbit> components) : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("ConvexMeasure: no components");
  const std::size_t d = components_.front().measure.orbit.dim();
  double total = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const auto& c = components_[i];
    if (!(c.weight > 0.0)) {
      throw std::invalid_argument(fmt::format("ConvexMeasure: component {} has non-positive weight {}", i, c.weight));
    }
    if (c.measure.orbit.dim() != d) throw std::invalid_argument("ConvexMeasure: components differ in dimension");
    for (std::size_t j = 0; j < i; ++j) {
      if (components_[j].measure.orbit == c.measure.orbit) {
        throw std::invalid_argument(fmt::format("ConvexMeasure: components {} and {} lie on the same orbit", j, i));
      }
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument(fmt::format("ConvexMeasure: weights sum to {:.17g}, expected 1", total));
  }
}

ConvexMeasure ConvexMeasure::single(const Orbit& orbit) { return ConvexMeasure({{1.0, OrbitMeasure{orbit}}}); }

TestFamily::TestFamily(std::vector<TestSymbol> members) : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("TestFamily: empty family");
  for (const auto& m : members_) {
    if (m.symbol.dim() != members_.front().symbol.dim()) {
      throw std::invalid_argument("TestFamily: members differ in dimension");
    }
  }
}

double monomial_sphere_sup(const MonomialKey& key) {
  const int total = key.degree();
  if (total == 0) return 1.0;
  double log_sup = 0.0;
  for (std::size_t j = 0; j < key.beta.dim(); ++j) {
    const int e = key.beta[j] + key.gamma[j];
    if (e > 0) log_sup += 0.5 * e * std::log(static_cast<double>(e) / total);
  }
  return std::exp(log_sup);
}

namespace {

void indices_up_to(std::size_t d, int max_level, std::vector<MultiIndex>& out) {
  MultiIndex::Storage cur(d, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
    if (j == d) {
      out.emplace_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[j] = k;
      rec(j + 1, left - k);
    }
  };
  rec(0, max_level);
}

}  // namespace

TestFamily TestFamily::graded(std::size_t dim, int max_each) {
  if (dim == 0 || max_each < 0) throw std::invalid_argument("TestFamily::graded: bad arguments");
  std::vector<MultiIndex> idx;
  indices_up_to(dim, max_each, idx);
  std::vector<MonomialKey> keys;
  for (const auto& b : idx) {
    for (const auto& g : idx) keys.push_back({b, g});
  }
  std::stable_sort(keys.begin(), keys.end(), [](const MonomialKey& x, const MonomialKey& y) {
    if (x.degree() != y.degree()) return x.degree() < y.degree();
    return x < y;
  });
  std::vector<TestSymbol> members;
  for (const auto& k : keys) {
    members.push_back({monomial_id(k), PolySymbol::monomial(k.beta, k.gamma, 1.0 / monomial_sphere_sup(k))});
  }
  return TestFamily(std::move(members));
}

Complex orbit_integral(const PolySymbol& a, const OrbitMeasure& m) {
  if (a.dim() != m.orbit.dim()) throw std::invalid_argument("orbit_integral: dimension mismatch");
  PolySymbol invariant_part(a.dim());
  for (const auto& [key, c] : a.terms()) {
    if (key.beta.level() == key.gamma.level()) invariant_part.add_term(key.beta, key.gamma, c);
  }
  return invariant_part.evaluate(m.orbit.w0());
}

Complex orbit_integral_trapezoid(const PolySymbol& a, const OrbitMeasure& m, int nodes) {
  if (a.dim() != m.orbit.dim()) throw std::invalid_argument("orbit_integral_trapezoid: dimension mismatch");
  if (nodes <= 0) nodes = 2 * a.degree() + 1;
  Complex sum{};
  for (int k = 0; k < nodes; ++k) {
    const double t = std::numbers::pi * k / nodes;
    sum += a.evaluate(ComplexVector(std::polar(1.0, -2.0 * t) * m.orbit.w0()));
  }
  return sum / static_cast<double>(nodes);
}

Complex convex_integral(const PolySymbol& a, const ConvexMeasure& mu) {
  Complex sum{};
  for (const auto& c : mu.components()) sum += c.weight * orbit_integral(a, c.measure);
  return sum;
}

ValueTable value_table(const TestFamily& family, const ConvexMeasure& mu) {
  ValueTable out;
  out.reserve(family.size());
  for (const auto& m : family.members()) out.push_back(convex_integral(m.symbol, mu));
  return out;
}

double weak_star_distance(const ValueTable& v1, const ValueTable& v2) {
  if (v1.size() != v2.size()) {
    throw std::invalid_argument(fmt::format("weak_star_distance: table lengths differ ({} vs {})", v1.size(), v2.size()));
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < v1.size(); ++k) {
    sum += std::min(std::abs(v1[k] - v2[k]), std::ldexp(1.0, -static_cast<int>(k + 1)));
  }
  return sum;
}

double weak_star_distance(const ValueTable& v1, const ValueTable& v2, const TestFamily& family) {
  if (v1.size() != family.size() || v2.size() != family.size()) {
    throw std::invalid_argument(fmt::format("weak_star_distance: tables ({}, {}) do not match family size {}",
                                            v1.size(), v2.size(), family.size()));
  }
  return weak_star_distance(v1, v2);
}

ApproximationResult approximate_invariant(const PointSampler& sampler, int m, const TestFamily& family,
                                          std::mt19937_64& rng, const std::optional<ValueTable>& reference) {
  if (m <= 0) throw std::invalid_argument("approximate_invariant: m must be positive");
  std::vector<WeightedOrbit> comps;
  const double w = 1.0 / m;
  for (int i = 0; i < m; ++i) {
    const Orbit orbit = orbit_through(sampler(rng));
    auto it = std::find_if(comps.begin(), comps.end(), [&](const WeightedOrbit& c) { return c.measure.orbit == orbit; });
    if (it != comps.end()) {
      it->weight += w;
    } else {
      comps.push_back({w, OrbitMeasure{orbit}});
    }
  }
  // Rescale so the summed weights are 1 to rounding.
  double total = 0.0;
  for (const auto& c : comps) total += c.weight;
  for (auto& c : comps) c.weight /= total;
  ConvexMeasure mu(std::move(comps));
  std::optional<double> dist;
  if (reference) dist = weak_star_distance(value_table(family, mu), *reference, family);
  return {std::move(mu), dist};
}

}  // namespace osclab
