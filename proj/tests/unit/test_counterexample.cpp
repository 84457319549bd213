#include <gtest/gtest.h>

#include "cstar/counterexample.hpp"
#include "oracles.hpp"

using namespace cstar;

TEST(Counterexample, RejectsBadTruncation) {
  EXPECT_THROW(build_setting(3, 4), Error);
  EXPECT_THROW(build_setting(3, 0), Error);
}

TEST(Counterexample, SmallestSetting) {
  const TruncatedCSetting s = build_setting(1, 1);
  EXPECT_EQ(s.shape.num_blocks(), 2);
  EXPECT_LT(norm(s.f(s.v) - s.v), 1e-15);
  EXPECT_LT(norm(s.f - theta(s.witness(1), s.basis(1))), 1e-15);
}

TEST(Counterexample, FixesWitnessesAndHasNormOne) {
  const TruncatedCSetting s = build_setting(8, 8);
  EXPECT_NEAR(norm(s.f), 1.0, 1e-14);
  for (int k = 1; k <= 8; ++k) {
    EXPECT_LT(norm(s.f(s.witness(k)) - s.witness(k)), 1e-15);
    EXPECT_NEAR(norm(s.witness(k)), 1.0, 1e-15);
    // v delta^k = e_k delta^k / k!
    EXPECT_LT(norm(s.v * s.delta(k) - s.witness(k) * Complex(1.0 / oracle::factorial(k))), 1e-15);
  }
  EXPECT_EQ(s.limit_block(), 8);
  EXPECT_EQ(norm(s.v.coord(0).block(8)(0, 0)), 0.0);
}

TEST(Counterexample, IndependentDimension) {
  const TruncatedCSetting s = build_setting(6, 3);
  EXPECT_EQ(s.shape.num_blocks(), 7);
  EXPECT_EQ(s.f.source_dim(), 3);
  EXPECT_NEAR(norm(s.f), 1.0, 1e-14);
  EXPECT_THROW(s.witness(4), IndexOutOfRange);
}

TEST(CoeffGrowth, FirstWitness) {
  const auto rows = coeff_growth(build_setting(4, 4), 1e-9);
  EXPECT_NEAR(rows[0].required_norm, 1.0, 1e-8);
}

TEST(CoeffGrowth, FifthWitnessAtTenthAccuracy) {
  const auto rows = coeff_growth(build_setting(5, 5), 0.1);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[4].k, 5);
  EXPECT_GE(rows[4].required_norm, 108.0 * (1 - 1e-12));
  for (const auto& r : rows) EXPECT_NEAR(r.required_norm, 0.9 * oracle::factorial(r.k), 1e-12 * r.factorial);
}

TEST(CoeffGrowth, DegradesAsEpsApproachesOne) {
  const TruncatedCSetting s = build_setting(4, 4);
  double previous = INFINITY;
  for (double eps : {0.5, 0.9, 0.99, 0.999999}) {
    const double top = coeff_growth(s, eps).back().required_norm;
    EXPECT_LT(top, previous);
    previous = top;
  }
  EXPECT_LT(previous, 1e-4);
  EXPECT_EQ(coeff_growth(s, 1.0).back().required_norm, 0.0);
}

TEST(MinNormCoefficient, MatchesScalarOracle) {
  // Over C (one point): y = 2 e1, v = e1 + e2; a* = 1, d = sqrt2, eps = 2:
  // radius sqrt(4 - 2)/sqrt2 = 1, min |a| = 0.
  const AlgebraShape c = AlgebraShape::commutative(1);
  const ModuleVector e1 = ModuleVector::basis(c, 2, 0);
  const ModuleVector v = e1 + ModuleVector::basis(c, 2, 1);
  EXPECT_NEAR(*min_norm_coefficient(v, e1 * Complex(2.0), 2.0), 0.0, 1e-15);
  EXPECT_NEAR(*min_norm_coefficient(v, e1 * Complex(2.0), 1.5), 1.0 - std::sqrt(0.25) / std::sqrt(2.0), 1e-15);
  EXPECT_FALSE(min_norm_coefficient(v, e1 * Complex(2.0), 1.0).has_value());
  EXPECT_THROW(min_norm_coefficient(ModuleVector::zero(AlgebraShape({2}), 1), ModuleVector::zero(AlgebraShape({2}), 1), 1.0),
               ShapeMismatch);
}

TEST(TailObstruction, EqualsOneBelowTruncation) {
  for (int m : {4, 8, 16}) {
    const TruncatedCSetting s = build_setting(m, m);
    for (int n = 0; n < m; ++n) EXPECT_NEAR(tail_obstruction(s, n), 1.0, 1e-12);
    EXPECT_THROW(tail_obstruction(s, m), IndexOutOfRange);
  }
}

TEST(TailObstruction, BulkAloneStaysBelowOne) {
  const TruncatedCSetting s = build_setting(8, 8);
  const BallSampler sampler{11, 64, true};
  for (int n = 1; n < 8; ++n) EXPECT_LT(bulk_tail(s, n, sampler), 1.0);
}

TEST(SingleGenerator, ReproducesV) {
  const TruncatedCSetting s = build_setting(6, 6);
  const auto fit = single_generator_approx(s, s.v, 0.01, 6);
  EXPECT_LT(fit.residual, 1e-15);
  EXPECT_LT(norm(fit.coefficient - AlgebraElement::identity(s.shape) + AlgebraElement::block_unit(s.shape, 6)), 1e-12);
}

TEST(SingleGenerator, WitnessNeedsFactorial) {
  const TruncatedCSetting s = build_setting(6, 6);
  for (int k = 1; k <= 6; ++k) {
    const auto fit = single_generator_approx(s, s.witness(k), 0.01);
    EXPECT_LT(fit.residual, 1e-12);
    EXPECT_NEAR(norm(fit.coefficient), oracle::factorial(k), 1e-9);
  }
}

TEST(SingleGenerator, RandomImagesWithinEps) {
  const TruncatedCSetting s = build_setting(8, 8);
  for (double eps : {0.5, 0.1, 0.01}) {
    for (const auto& x : BallSampler{12, 32, true}.draw(s.shape, s.dim)) {
      const auto fit = single_generator_approx(s, s.f(x), eps);
      EXPECT_TRUE(fit.in_range);
      EXPECT_TRUE(fit.within_eps);
    }
  }
}

TEST(SingleGenerator, ReportsFloorOutsideRange) {
  const TruncatedCSetting s = build_setting(4, 4);
  const ModuleVector y = s.basis(2);  // e_2 is not in the range of F
  const auto fit = single_generator_approx(s, y, 0.1);
  EXPECT_FALSE(fit.in_range);
  EXPECT_NEAR(fit.floor, 1.0, 1e-15);
  EXPECT_FALSE(fit.within_eps);
}
