#include "osclab/config.hpp"
#include "osclab/harness.hpp"
#include "osclab/metaplectic.hpp"
#include "osclab/suites.hpp"

#include <fmt/format.h>
#include <gtest/gtest.h>

#include <cmath>

using namespace osclab;

namespace {

Orbit axis(std::size_t d, std::size_t j) {
  PhasePoint z{RealVector::Zero(static_cast<Eigen::Index>(d)), RealVector::Zero(static_cast<Eigen::Index>(d))};
  z.x[static_cast<Eigen::Index>(j)] = 1.0;
  return orbit_through(z);
}

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  if (pos != std::string::npos) s.replace(pos, from.size(), to);
  return s;
}

}  // namespace

TEST(BuildState, SingleReferenceOrbit) {
  for (int n : {0, 3, 20}) {
    const BuiltState g = build_state(ConvexMeasure::single(reference_orbit(2)), n);
    EXPECT_EQ(g.raw_norm, 1.0);
    EXPECT_EQ(g.state.size(), 1u);
    EXPECT_EQ(g.state.coefficient(MultiIndex{n, 0}), Complex(1.0));
  }
}

TEST(BuildState, OrthogonalAxisPair) {
  const ConvexMeasure mu({{0.5, {axis(2, 0)}}, {0.5, {axis(2, 1)}}});
  const BuiltState g = build_state(mu, 1);
  EXPECT_EQ(g.state.size(), 2u);
  EXPECT_NEAR(g.raw_norm, 1.0, 1e-15);
  EXPECT_NEAR(std::abs(g.state.coefficient(MultiIndex{1, 0})), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(std::abs(g.state.coefficient(MultiIndex{0, 1})), std::sqrt(0.5), 1e-15);
  // Every f_n^{A_i} is an eigenvector for the same eigenvalue, so g_n is too.
  const FockState pg = weyl_apply(PolySymbol::energy(2), g.state);
  EXPECT_LE((pg - g.state).norm(), 1e-12);
}

TEST(BuildState, SlackShiftsHbar) {
  const BuiltState g = build_state(ConvexMeasure::single(reference_orbit(1)), 4, 1e-3);
  EXPECT_DOUBLE_EQ(g.state.hbar(), hbar_schedule(4, 1, 1e-3));
}

TEST(CrossTerms, AxisPairIsExactlyZero) {
  const auto rep = cross_term_report(axis(2, 0), axis(2, 1), TestFamily::graded(2, 1), {4, 8});
  for (const auto& r : rep.rows) {
    if (r.symbol_id == "b0:0;g0:0") EXPECT_EQ(r.abs_value, 0.0);
  }
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.to_csv().substr(0, rep.to_csv().find('\n')), "n,symbol_id,abs_value");
  EXPECT_THROW(cross_term_report(axis(2, 0), axis(2, 0), TestFamily::graded(2, 1), {4}), std::invalid_argument);
}

TEST(CrossTerms, RandomPairDecays) {
  std::mt19937_64 rng(3);
  const auto [a, b] = random_separated_orbits(2, rng);
  EXPECT_LE(std::abs(a.w0().dot(b.w0())), 0.9);
  const auto rep = cross_term_report(a, b, TestFamily::graded(2, 1), {8, 16, 32, 64});
  for (const auto& [id, v] : rep.verdicts) EXPECT_TRUE(v.passed) << id << ": " << v.reason;
}

TEST(SeparatedOrbits, RequiresTwoDimensions) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(random_separated_orbits(1, rng), std::invalid_argument);
}

TEST(ConvergenceCsv, RoundTrip) {
  const auto rep = converge_report(ConvexMeasure::single(reference_orbit(1)), TestFamily::graded(1), {1, 2, 4});
  const std::string csv = rep.to_csv();
  const auto back = ConvergenceReport::from_csv(csv);
  ASSERT_EQ(back.rows.size(), rep.rows.size());
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    EXPECT_EQ(back.rows[k].n, rep.rows[k].n);
    EXPECT_EQ(back.rows[k].hbar, rep.rows[k].hbar);
    EXPECT_EQ(back.rows[k].value, rep.rows[k].value);
    EXPECT_EQ(back.rows[k].abs_error, rep.rows[k].abs_error);
  }
  EXPECT_EQ(back.to_csv(), csv);
}

TEST(ConvergenceCsv, RejectsTamperedRows) {
  const auto rep = converge_report(ConvexMeasure::single(reference_orbit(1)), TestFamily::graded(1, 1), {1, 2});
  const std::string csv = rep.to_csv();
  // h_1 = 1/3 in d = 1.
  const std::string h = fmt::format("{:.17g}", 1.0 / 3.0);
  ASSERT_NE(csv.find(h), std::string::npos);
  EXPECT_THROW(ConvergenceReport::from_csv(replace_once(csv, "," + h + ",", ",0.3333,")), std::invalid_argument);
  ConvergenceReport bad = rep;
  bad.rows[0].abs_error += 0.5;
  EXPECT_THROW(ConvergenceReport::from_csv(bad.to_csv()), std::invalid_argument);
  EXPECT_THROW(ConvergenceReport::from_csv(replace_once(csv, "# dim=1\n", "")), std::invalid_argument);
  EXPECT_THROW(ConvergenceReport::from_csv("# dim=1\n"), std::invalid_argument);
}

TEST(Convergence, QuarticOnReferenceOrbit) {
  std::vector<TestSymbol> members{{"quartic", PolySymbol::energy(1).pow(2)}};
  const TestFamily f(members);
  const auto rep = converge_report(ConvexMeasure::single(reference_orbit(1)), f, {1, 2, 4, 8});
  const auto col = rep.column("quartic");
  for (std::size_t k = 0; k < col.size(); ++k) {
    const double h = hbar_schedule(1 << k, 1);
    EXPECT_NEAR(col[k], h * h, 1e-13);
  }
  EXPECT_TRUE(check_convergence(rep).at("quartic").passed);
}

TEST(Convergence, VerdictRules) {
  ConvergenceReport rep;
  rep.dim = 1;
  auto add = [&](const std::string& id, std::vector<double> errs) {
    int n = 1;
    for (double e : errs) {
      rep.rows.push_back({n, hbar_schedule(n, 1), id, Complex(e), Complex(0.0), e});
      n *= 2;
    }
  };
  add("decreasing", {0.4, 0.2, 0.1, 0.05});
  add("zero", {0.0, 0.0, 0.0, 0.0});
  add("flat", {0.01, 0.01, 0.01, 0.01});
  add("large", {0.4, 0.3, 0.2, 0.1});
  const auto v = check_convergence(rep);
  EXPECT_TRUE(v.at("decreasing").passed);
  EXPECT_TRUE(v.at("zero").passed);
  EXPECT_FALSE(v.at("flat").passed);
  EXPECT_FALSE(v.at("large").passed);
}

TEST(Decay, VerdictRules) {
  EXPECT_TRUE(check_decay({{8, 16}, {1e-2, 1e-4}, {1e-8, 1e-8}}, 1e-3).passed);
  EXPECT_TRUE(check_decay({{8, 16}, {1e-9, 2e-9}, {1e-8, 1e-8}}, 1e-3).passed);
  EXPECT_FALSE(check_decay({{8, 16}, {1e-4, 2e-4}, {1e-8, 1e-8}}, 1e-3).passed);
  EXPECT_FALSE(check_decay({{8, 16}, {1e-1, 1e-2}, {1e-8, 1e-8}}, 1e-3).passed);
}

TEST(Config, ParsesAndRejects) {
  const SuiteConfig c = parse_config(R"({"seed": 5, "dim": 3, "n_list": [4, 8], "tolerances": {"eigen": 1e-10}})");
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.dim, 3u);
  EXPECT_EQ(c.n_list, (std::vector<int>{4, 8}));
  EXPECT_EQ(c.tol.eigen, 1e-10);
  EXPECT_THROW(parse_config(R"({"sede": 5})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"dim": 1})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"seed": )"), ConfigError);
  try {
    parse_measure(R"({"dim": 1, "components": [{"weight": "x", "generator": [1, 0]}]})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("/components/0/weight"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_measure(R"({"dim": 1, "components": [{"weight": 1, "generator": [1]}]})"), ConfigError);
  EXPECT_THROW(parse_measure(R"({"dim": 2, "components": [{"weight": 0.5, "generator": [1, 0, 0, 0]}]})"),
               ConfigError);
}

TEST(Config, MeasureRoundTripAndHash) {
  const ConvexMeasure mu({{0.25, {axis(2, 0)}}, {0.75, {axis(2, 1)}}});
  const ConvexMeasure back = parse_measure(measure_to_json(mu));
  ASSERT_EQ(back.components().size(), 2u);
  EXPECT_EQ(back.components()[0].weight, 0.25);
  EXPECT_EQ(back.components()[1].measure.orbit, axis(2, 1));
  SuiteConfig a;
  SuiteConfig b;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.seed = 1;
  EXPECT_NE(config_hash(a), config_hash(b));
  const SuiteConfig again = parse_config(config_to_json(a));
  EXPECT_EQ(config_hash(again), config_hash(a));
}

TEST(Config, FamilyFile) {
  const TestFamily f =
      parse_family(R"({"dim": 1, "symbols": [{"id": "e", "terms": [{"beta": [1], "gamma": [1], "re": 1}]}]})");
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].id, "e");
  EXPECT_THROW(parse_family(R"({"dim": 1, "symbols": [{"id": "e", "terms": [{"beta": [1, 0], "gamma": [1], "re": 1}]}]})"),
               ConfigError);
}

TEST(IntList, Parsing) {
  EXPECT_EQ(parse_int_list("8,16,32"), (std::vector<int>{8, 16, 32}));
  EXPECT_THROW(parse_int_list("8,x"), ConfigError);
  EXPECT_THROW(parse_int_list(""), ConfigError);
}

TEST(Suites, DeterministicAndSeedSensitive) {
  SuiteConfig c;
  c.suites = {"eigen", "cross_terms"};
  c.n_list = {8, 16, 32};
  const SuitesReport a = run_suites(c);
  const SuitesReport b = run_suites(c);
  EXPECT_EQ(a.json, b.json);
  EXPECT_TRUE(a.passed());
  c.seed += 1;
  EXPECT_NE(run_suites(c).json, a.json);
}

TEST(Suites, ZeroToleranceReportsViolations) {
  SuiteConfig c;
  c.suites = {"unitarity", "covariance"};
  c.tol.set_all(0.0);
  const SuitesReport r = run_suites(c);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.violations().empty());
}

TEST(Suites, RejectsUnknownName) {
  SuiteConfig c;
  c.suites = {"nope"};
  EXPECT_THROW(run_suites(c), ConfigError);
}
