#include "cstar/frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cstar {
namespace {

std::size_t idx(int k) { return static_cast<std::size_t>(k); }

ModuleOperator analysis_operator(const std::vector<ModuleVector>& vectors) {
  const AlgebraShape& shape = vectors.front().shape();
  const int dim = vectors.front().dim();
  const int count = static_cast<int>(vectors.size());
  std::vector<Matrix> blocks;
  for (int k = 0; k < shape.num_blocks(); ++k) {
    const int n = shape.block_dim(k);
    Matrix t(count * n, dim * n);
    for (int j = 0; j < count; ++j) t.middleRows(j * n, n) = vectors[idx(j)].block(k).adjoint();
    blocks.push_back(std::move(t));
  }
  return ModuleOperator::from_blocks(shape, count, dim, std::move(blocks));
}

}  // namespace

Frame::Frame(std::vector<ModuleVector> vectors, FrameScope scope, ModuleOperator analysis,
             ModuleOperator frame_operator, ModuleOperator inverse, ModuleOperator projection, FrameBounds bounds,
             std::vector<ModuleVector> dual)
    : vectors_(std::move(vectors)),
      scope_(scope),
      analysis_(std::move(analysis)),
      frame_operator_(std::move(frame_operator)),
      frame_operator_inverse_(std::move(inverse)),
      projection_(std::move(projection)),
      bounds_(bounds),
      dual_(std::move(dual)) {}

Frame Frame::build(std::vector<ModuleVector> vectors, FrameScope scope, double tol) {
  if (vectors.empty()) throw NotAFrame("empty family");
  for (const auto& v : vectors) require_compatible(vectors.front(), v, "frame vectors");

  ModuleOperator theta_op = analysis_operator(vectors);
  ModuleOperator s = theta_op.adjoint() * theta_op;
  const AlgebraShape& shape = s.shape();

  struct Spectrum {
    Eigen::VectorXd values;
    Matrix vectors;
  };
  std::vector<Spectrum> spectra;
  double top = 0.0;
  for (const auto& b : s.blocks()) {
    const Matrix h = (b + b.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    top = std::max(top, es.eigenvalues().maxCoeff());
    spectra.push_back({es.eigenvalues(), es.eigenvectors()});
  }
  if (!(top > 0.0)) throw NotAFrame("family is zero");
  const double floor = tol * top;

  double lower = std::numeric_limits<double>::infinity();
  std::vector<Matrix> inv_blocks;
  std::vector<Matrix> proj_blocks;
  for (int k = 0; k < shape.num_blocks(); ++k) {
    const auto& sp = spectra[idx(k)];
    const Eigen::Index m = sp.values.size();
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd on = Eigen::VectorXd::Zero(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double lambda = sp.values(i);
      if (scope == FrameScope::Ambient) {
        if (lambda <= floor)
          throw NotAFrame("lower frame bound " + std::to_string(lambda) + " is below tolerance (block " +
                          std::to_string(k) + ")");
      } else if (lambda <= floor) {
        continue;
      }
      lower = std::min(lower, lambda);
      inv(i) = 1.0 / lambda;
      on(i) = 1.0;
    }
    inv_blocks.push_back(sp.vectors * inv.asDiagonal() * sp.vectors.adjoint());
    proj_blocks.push_back(sp.vectors * on.asDiagonal() * sp.vectors.adjoint());
  }
  const int dim = vectors.front().dim();
  ModuleOperator s_inv = ModuleOperator::from_blocks(shape, dim, dim, std::move(inv_blocks));
  ModuleOperator projection = scope == FrameScope::Ambient
                                  ? ModuleOperator::identity(shape, dim)
                                  : ModuleOperator::from_blocks(shape, dim, dim, std::move(proj_blocks));

  std::vector<ModuleVector> dual;
  dual.reserve(vectors.size());
  for (const auto& v : vectors) dual.push_back(s_inv(v));

  return Frame(std::move(vectors), scope, std::move(theta_op), std::move(s), std::move(s_inv), std::move(projection),
               FrameBounds{lower, top}, std::move(dual));
}

ModuleOperator Frame::partial_sum(std::span<const std::size_t> indices) const {
  ModuleOperator p = ModuleOperator::zero(shape(), dim(), dim());
  for (std::size_t j : indices) {
    if (j >= size()) throw IndexOutOfRange("frame index " + std::to_string(j) + " >= " + std::to_string(size()));
    p += theta(vectors_[j], dual_[j]);
  }
  return p;
}

ModuleOperator Frame::partial_sum_factored(std::span<const std::size_t> indices) const {
  const int count = static_cast<int>(size());
  std::vector<Matrix> pi_blocks;
  for (int n : shape().block_dims()) pi_blocks.push_back(Matrix::Zero(count * n, count * n));
  for (std::size_t j : indices) {
    if (j >= size()) throw IndexOutOfRange("frame index " + std::to_string(j) + " >= " + std::to_string(size()));
    for (int k = 0; k < shape().num_blocks(); ++k) {
      const int n = shape().block_dim(k);
      pi_blocks[idx(k)].block(static_cast<Eigen::Index>(j) * n, static_cast<Eigen::Index>(j) * n, n, n).setIdentity();
    }
  }
  const ModuleOperator pi = ModuleOperator::from_blocks(shape(), count, count, std::move(pi_blocks));
  return synthesis() * pi * analysis_ * frame_operator_inverse_;
}

ModuleOperator Frame::prefix_sum(std::size_t n) const {
  if (n > size()) throw IndexOutOfRange("prefix length " + std::to_string(n) + " > " + std::to_string(size()));
  std::vector<std::size_t> indices(n);
  for (std::size_t j = 0; j < n; ++j) indices[j] = j;
  return partial_sum(indices);
}

ModuleVector Frame::reconstruct(const ModuleVector& x, std::size_t n) const {
  require_compatible(vectors_.front(), x, "reconstruction");
  if (n > size()) throw IndexOutOfRange("prefix length " + std::to_string(n) + " > " + std::to_string(size()));
  ModuleVector sum = ModuleVector::zero(shape(), dim());
  for (std::size_t j = 0; j < n; ++j) sum += vectors_[j] * inner(dual_[j], x);
  return sum;
}

double Frame::reconstruction_tail(const ModuleVector& x, std::size_t n) const {
  return norm(x - reconstruct(x, n));
}

std::vector<double> Frame::tail_profile(const ModuleVector& x) const {
  require_compatible(vectors_.front(), x, "tail profile");
  std::vector<double> out;
  out.reserve(size() + 1);
  ModuleVector rest = x;
  out.push_back(norm(rest));
  for (std::size_t j = 0; j < size(); ++j) {
    rest -= vectors_[j] * inner(dual_[j], x);
    out.push_back(norm(rest));
  }
  return out;
}

}  // namespace cstar
