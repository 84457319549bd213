#include <gtest/gtest.h>

#include "cstar/frame.hpp"
#include "cstar/sampling.hpp"
#include "oracles.hpp"

using namespace cstar;

namespace {

std::vector<ModuleVector> standard_basis(const AlgebraShape& s, int dim) {
  std::vector<ModuleVector> out;
  for (int j = 0; j < dim; ++j) out.push_back(ModuleVector::basis(s, dim, j));
  return out;
}

}  // namespace

TEST(Frame, StandardBasisIsParseval) {
  const AlgebraShape s({1, 2});
  const Frame f = Frame::build(standard_basis(s, 3));
  EXPECT_NEAR(f.bounds().lower, 1.0, 1e-14);
  EXPECT_NEAR(f.bounds().upper, 1.0, 1e-14);
  for (std::size_t j = 0; j < f.size(); ++j) EXPECT_LT(norm(f.dual()[j] - f.vectors()[j]), 1e-14);
}

TEST(Frame, RepeatedVectorBounds) {
  // {e1, e1, e2} over C: S = diag(2, 1).
  const AlgebraShape c = AlgebraShape::commutative(1);
  const auto e = standard_basis(c, 2);
  const Frame f = Frame::build({e[0], e[0], e[1]});
  EXPECT_NEAR(f.bounds().lower, 1.0, 1e-14);
  EXPECT_NEAR(f.bounds().upper, 2.0, 1e-14);
  EXPECT_LT(norm(f.dual()[0] - e[0] * Complex(0.5)), 1e-14);
}

TEST(Frame, ScaledBasisBounds) {
  // {2 e1, e2} over C^2 (two points): S = diag(4, 1) at every point.
  const AlgebraShape c = AlgebraShape::commutative(2);
  const auto e = standard_basis(c, 2);
  const Frame f = Frame::build({e[0] * Complex(2.0), e[1]});
  EXPECT_NEAR(f.bounds().lower, 1.0, 1e-14);
  EXPECT_NEAR(f.bounds().upper, 4.0, 1e-14);
}

TEST(Frame, RejectsNonFrames) {
  const AlgebraShape s({1, 2});
  EXPECT_THROW(Frame::build({}), NotAFrame);
  EXPECT_THROW(Frame::build({ModuleVector::zero(s, 2)}), NotAFrame);
  EXPECT_THROW(Frame::build({ModuleVector::basis(s, 2, 0)}), NotAFrame);
  // Vanishes on block 1: not a frame of the whole module.
  EXPECT_THROW(Frame::build({ModuleVector::basis(s, 1, 0) * AlgebraElement::block_unit(s, 0)}), NotAFrame);
}

TEST(Frame, SpanScopeFramesASubmodule) {
  const AlgebraShape s({1, 2});
  const Frame f = Frame::build({ModuleVector::basis(s, 2, 0)}, FrameScope::Span);
  EXPECT_NEAR(f.bounds().lower, 1.0, 1e-14);
  EXPECT_LT(norm(f.submodule_projection() - coordinate_projection(s, 2, 0, 1)), 1e-14);
}

TEST(Frame, RandomFramesSatisfyFrameInequality) {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const AlgebraShape s = random_mixed_shape(rng, 2);
    const int dim = 2 + trial % 3;
    const auto vectors = random_frame_vectors(rng, s, dim, dim + 2);
    const Frame f = Frame::build(vectors);
    const auto [c1, c2] = f.bounds();
    for (int probe = 0; probe < 10; ++probe) {
      const ModuleVector x = random_vector(rng, s, dim);
      const AlgebraElement sum = oracle::frame_sum(vectors, x);
      const AlgebraElement xx = inner(x, x);
      const double scale = norm(xx) * c2;
      EXPECT_GE(oracle::min_eig(sum - xx * Complex(c1)), -1e-10 * scale);
      EXPECT_GE(oracle::min_eig(xx * Complex(c2) - sum), -1e-10 * scale);
      EXPECT_LT(f.reconstruction_tail(x, f.size()), 1e-9 * norm(x));
    }
  }
}

TEST(Frame, BoundsAreOptimal) {
  Rng rng(32);
  const AlgebraShape s({2});
  const auto vectors = random_frame_vectors(rng, s, 2, 4);
  const Frame f = Frame::build(vectors);
  // The extreme eigenvectors of S realize the bounds on rank-one elements.
  const Matrix& sk = f.frame_operator().block(0);
  Eigen::SelfAdjointEigenSolver<Matrix> es((sk + sk.adjoint()) / 2.0);
  for (int which : {0, 3}) {
    Matrix col = Matrix::Zero(4, 2);
    col.col(0) = es.eigenvectors().col(which);
    const ModuleVector x = ModuleVector::from_blocks(s, 2, {col});
    const double ratio = norm(oracle::frame_sum(vectors, x)) / norm(inner(x, x));
    EXPECT_NEAR(ratio, which == 0 ? f.bounds().lower : f.bounds().upper, 1e-10);
  }
}

TEST(Frame, PartialSumsAgreeAndAreBounded) {
  Rng rng(33);
  const AlgebraShape s({1, 2});
  const Frame f = Frame::build(random_frame_vectors(rng, s, 3, 6));
  const std::vector<std::size_t> idx{0, 2, 5};
  const ModuleOperator p = f.partial_sum(idx);
  EXPECT_LT(norm(p - f.partial_sum_factored(idx)), 1e-10);
  EXPECT_LE(norm(p), f.bounds().upper / f.bounds().lower + 1e-8);
  const std::vector<std::size_t> bad{6};
  EXPECT_THROW(f.partial_sum(bad), IndexOutOfRange);
  EXPECT_THROW(f.prefix_sum(7), IndexOutOfRange);
  EXPECT_LT(norm(f.prefix_sum(f.size()) - ModuleOperator::identity(s, 3)), 1e-10);
}

TEST(Frame, TailProfileMatchesPointwiseTails) {
  Rng rng(34);
  const AlgebraShape s({2, 1});
  const Frame f = Frame::build(random_frame_vectors(rng, s, 2, 4));
  const ModuleVector x = random_vector(rng, s, 2);
  const auto profile = f.tail_profile(x);
  ASSERT_EQ(profile.size(), f.size() + 1);
  for (std::size_t n = 0; n <= f.size(); ++n) EXPECT_NEAR(profile[n], f.reconstruction_tail(x, n), 1e-12);
  EXPECT_NEAR(profile[0], norm(x), 1e-14);
}
