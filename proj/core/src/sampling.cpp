#include "cstar/sampling.hpp"

#include <algorithm>

namespace cstar {

Matrix random_matrix(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

AlgebraElement random_element(Rng& rng, const AlgebraShape& shape) {
  std::vector<Matrix> blocks;
  for (int n : shape.block_dims()) blocks.push_back(random_matrix(rng, n, n));
  return AlgebraElement(shape, std::move(blocks));
}

AlgebraElement random_positive(Rng& rng, const AlgebraShape& shape) {
  const AlgebraElement b = random_element(rng, shape);
  return b.adjoint() * b;
}

ModuleVector random_vector(Rng& rng, const AlgebraShape& shape, int dim) {
  std::vector<Matrix> blocks;
  for (int n : shape.block_dims()) blocks.push_back(random_matrix(rng, dim * n, n));
  return ModuleVector::from_blocks(shape, dim, std::move(blocks));
}

ModuleOperator random_operator(Rng& rng, const AlgebraShape& shape, int target_dim, int source_dim) {
  std::vector<Matrix> blocks;
  for (int n : shape.block_dims()) blocks.push_back(random_matrix(rng, target_dim * n, source_dim * n));
  return ModuleOperator::from_blocks(shape, target_dim, source_dim, std::move(blocks));
}

ModuleVector random_vector_with_norm(Rng& rng, const AlgebraShape& shape, int dim, double radius) {
  ModuleVector x = random_vector(rng, shape, dim);
  const double n = norm(x);
  return x * Complex(radius / n);
}

State random_state(Rng& rng, const AlgebraShape& shape) {
  std::vector<Matrix> densities;
  double total = 0.0;
  for (int n : shape.block_dims()) {
    const Matrix b = random_matrix(rng, n, n);
    Matrix rho = b.adjoint() * b;
    total += rho.trace().real();
    densities.push_back(std::move(rho));
  }
  for (auto& rho : densities) rho /= total;
  return State(shape, std::move(densities));
}

AlgebraShape random_mixed_shape(Rng& rng, int blocks) {
  std::uniform_int_distribution<int> pick(1, 2);
  std::vector<int> dims;
  for (int k = 0; k < blocks; ++k) dims.push_back(pick(rng));
  if (blocks >= 2) {
    dims[0] = 1;
    dims[1] = 2;
    std::shuffle(dims.begin(), dims.end(), rng);
  }
  return AlgebraShape(std::move(dims));
}

std::vector<ModuleVector> random_frame_vectors(Rng& rng, const AlgebraShape& shape, int dim, int count) {
  std::vector<ModuleVector> out;
  for (int j = 0; j < count; ++j) out.push_back(random_vector(rng, shape, dim));
  if (count < dim)
    for (int j = 0; j < dim; ++j) out.push_back(ModuleVector::basis(shape, dim, j));
  return out;
}

std::vector<ModuleVector> ball_witnesses(const AlgebraShape& shape, int dim) {
  std::vector<AlgebraElement> extremes{AlgebraElement::identity(shape)};
  if (shape.num_blocks() > 1)
    for (int k = 0; k < shape.num_blocks(); ++k) extremes.push_back(AlgebraElement::block_unit(shape, k));
  for (int k = 0; k < shape.num_blocks(); ++k) {
    if (shape.block_dim(k) < 2) continue;
    AlgebraElement e = AlgebraElement::zero(shape);
    std::vector<Matrix> blocks = e.blocks();
    blocks[static_cast<std::size_t>(k)](0, 0) = 1.0;
    extremes.emplace_back(shape, std::move(blocks));
  }
  std::vector<ModuleVector> out;
  for (int j = 0; j < dim; ++j)
    for (const auto& p : extremes) out.push_back(ModuleVector::basis(shape, dim, j) * p);
  return out;
}

std::vector<ModuleVector> BallSampler::draw(const AlgebraShape& shape, int dim) const {
  Rng rng(seed);
  std::uniform_real_distribution<double> radius(0.0, 1.0);
  std::vector<ModuleVector> out;
  if (include_witnesses) out = ball_witnesses(shape, dim);
  for (std::size_t i = 0; i < random_points; ++i) {
    const double r = 1.0 - radius(rng);  // (0, 1]
    out.push_back(random_vector_with_norm(rng, shape, dim, r));
  }
  return out;
}

}  // namespace cstar
