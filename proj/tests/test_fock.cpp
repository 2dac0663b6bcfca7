#include "osclab/fock.hpp"

#include <gtest/gtest.h>

using namespace osclab;

TEST(MultiIndex, LevelAndValidation) {
  const MultiIndex a{1, 2, 0};
  EXPECT_EQ(a.level(), 3);
  EXPECT_EQ(a.dim(), 3u);
  EXPECT_THROW((MultiIndex{1, -1}), std::invalid_argument);
  EXPECT_EQ(a.shifted(2, 4), (MultiIndex{1, 2, 4}));
  EXPECT_EQ(a.shifted(2, 4).level(), 7);
  EXPECT_THROW(a.shifted(0, -2), std::invalid_argument);
  EXPECT_EQ(MultiIndex::axis(3, 5), (MultiIndex{5, 0, 0}));
}

TEST(Schedule, Values) {
  EXPECT_EQ(hbar_schedule(0, 1), 1.0);
  EXPECT_EQ(hbar_schedule(3, 1), 1.0 / 7.0);
  EXPECT_EQ(hbar_schedule(10, 2), 1.0 / 22.0);
  for (int d = 1; d <= 4; ++d) {
    for (int n = 0; n < 300; ++n) {
      EXPECT_LT(hbar_schedule(n + 1, d), hbar_schedule(n, d));
      EXPECT_EQ(hbar_schedule(n, d), 1.0 / (2.0 * n + d));
    }
  }
  EXPECT_DOUBLE_EQ(hbar_schedule(3, 1, 1e-3), 1.0 / 7.0 + 1e-3);
  EXPECT_THROW(hbar_schedule(-1, 1), std::invalid_argument);
  EXPECT_THROW(hbar_schedule(0, 0), std::invalid_argument);
}

TEST(Eigenvalue, Examples) {
  EXPECT_EQ(eigenvalue(MultiIndex{0}, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(eigenvalue(MultiIndex{1, 2}, 0.1), 0.8);
  for (int d = 1; d <= 3; ++d) {
    for (int n : {0, 1, 7, 128}) EXPECT_EQ(eigenvalue(MultiIndex::axis(d, n), hbar_schedule(n, d)), 1.0);
  }
}

TEST(Ladder, AnnihilatesGroundState) {
  const FockState g = FockState::basis(MultiIndex{0}, 0.3);
  const FockState r = ladder_apply(Ladder::annihilation, 0, g);
  EXPECT_EQ(r.norm(), 0.0);
}

TEST(Ladder, NormalizedActions) {
  const double h = 0.125;
  const FockState s = FockState::basis(MultiIndex{2, 3}, h);
  const FockState up = ladder_apply(Ladder::creation, 1, s);
  EXPECT_DOUBLE_EQ(up.coefficient(MultiIndex{2, 4}).real(), std::sqrt(2 * h * 4));
  EXPECT_EQ(up.homogeneous_level(), 6);
  const FockState down = ladder_apply(Ladder::annihilation, 0, s);
  EXPECT_DOUBLE_EQ(down.coefficient(MultiIndex{1, 3}).real(), std::sqrt(2 * h * 2));
  EXPECT_EQ(down.homogeneous_level(), 4);
  EXPECT_THROW(ladder_apply(Ladder::creation, 2, s), std::out_of_range);
}

TEST(Ladder, CreationThenAnnihilationOnVacuum) {
  const double h = 0.37;
  const FockState v = FockState::basis(MultiIndex{0}, h);
  const FockState r = ladder_apply(Ladder::annihilation, 0, ladder_apply(Ladder::creation, 0, v));
  EXPECT_DOUBLE_EQ(r.coefficient(MultiIndex{0}).real(), 2 * h);
}

TEST(Ladder, NumberOperatorIdentities) {
  const double h = 0.05;
  for (int n = 0; n < 20; ++n) {
    const FockState s = FockState::basis(MultiIndex{n}, h);
    const FockState aa = ladder_apply(Ladder::creation, 0, ladder_apply(Ladder::annihilation, 0, s));
    const FockState bb = ladder_apply(Ladder::annihilation, 0, ladder_apply(Ladder::creation, 0, s));
    EXPECT_NEAR(aa.coefficient(MultiIndex{n}).real(), 2 * h * n, 1e-15);
    EXPECT_NEAR(bb.coefficient(MultiIndex{n}).real(), 2 * h * (n + 1), 1e-15);
    const Complex avg = 0.5 * (aa.coefficient(MultiIndex{n}) + bb.coefficient(MultiIndex{n}));
    EXPECT_NEAR(avg.real(), (2 * n + 1) * h, 1e-15);
    // P = A*A + h = AA* - h
    EXPECT_NEAR(aa.coefficient(MultiIndex{n}).real() + h, bb.coefficient(MultiIndex{n}).real() - h, 1e-15);
  }
}

TEST(ReferenceState, Examples) {
  const FockState r0 = reference_state(0, 3);
  EXPECT_EQ(r0.hbar(), 1.0 / 3.0);
  EXPECT_EQ(r0.size(), 1u);
  EXPECT_EQ(r0.coefficient(MultiIndex{0, 0, 0}), Complex(1.0));
  const FockState r5 = reference_state(5, 2);
  EXPECT_EQ(r5.hbar(), 1.0 / 12.0);
  EXPECT_EQ(r5.coefficient(MultiIndex{5, 0}), Complex(1.0));
  EXPECT_TRUE(r5.is_normalized());
  EXPECT_EQ(r5.homogeneous_level(), 5);
}

TEST(InnerProduct, Convention) {
  const double h = 0.5;
  const MultiIndex a{1, 0};
  const MultiIndex b{0, 1};
  EXPECT_EQ(inner_product(FockState::basis(a, h), FockState::basis(a, h)), Complex(1.0));
  EXPECT_EQ(inner_product(FockState::basis(a, h), FockState::basis(b, h)), Complex(0.0));
  FockState u(2, h);
  u.add(a, 0.6);
  u.add(b, Complex(0.0, 0.8));
  const Complex ip = inner_product(u, FockState::basis(b, h));
  EXPECT_DOUBLE_EQ(ip.real(), 0.0);
  EXPECT_DOUBLE_EQ(ip.imag(), 0.8);
  EXPECT_EQ(inner_product(FockState::basis(b, h), u), std::conj(ip));
}

TEST(InnerProduct, Mismatches) {
  EXPECT_THROW(inner_product(FockState(2, 0.5), FockState(3, 0.5)), std::invalid_argument);
  EXPECT_THROW(inner_product(FockState(2, 0.5), FockState(2, 0.25)), std::invalid_argument);
}

TEST(FockState, ArithmeticAndFlags) {
  const double h = 0.1;
  FockState u(2, h);
  u.add(MultiIndex{2, 0}, 3.0);
  u.add(MultiIndex{1, 1}, Complex(0.0, 4.0));
  EXPECT_DOUBLE_EQ(u.norm(), 5.0);
  EXPECT_FALSE(u.is_normalized());
  EXPECT_TRUE(u.normalized().is_normalized());
  EXPECT_EQ(u.homogeneous_level(), 2);
  u.add(MultiIndex{0, 0}, 1.0);
  EXPECT_FALSE(u.homogeneous_level().has_value());
  const FockState z = u - u;
  EXPECT_EQ(z.norm(), 0.0);
  EXPECT_THROW(z.normalized(), std::domain_error);
  EXPECT_THROW(u.add(MultiIndex{1}, 1.0), std::invalid_argument);
  EXPECT_THROW(FockState(1, 0.0), std::invalid_argument);
}

TEST(FockState, LevelChangesUnderLadders) {
  const FockState s = reference_state(4, 3);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_EQ(ladder_apply(Ladder::creation, j, s).homogeneous_level(), 5);
  }
  EXPECT_EQ(ladder_apply(Ladder::annihilation, 0, s).homogeneous_level(), 3);
}
