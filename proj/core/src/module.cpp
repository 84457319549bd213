#include "cstar/module.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cstar {
namespace {

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

std::size_t idx(int k) { return static_cast<std::size_t>(k); }

// Orthonormal basis of the column space, ranks decided against `floor`.
Matrix range_basis(const Matrix& m, double floor) {
  if (m.cols() == 0 || m.rows() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > floor) ++r;
  return svd.matrixU().leftCols(r);
}

double max_block_norm(std::span<const Matrix> blocks) {
  double s = 0.0;
  for (const auto& b : blocks) s = std::max(s, spectral_norm(b));
  return s;
}

}  // namespace

// ---------------------------------------------------------------- vectors

ModuleVector::ModuleVector(AlgebraShape shape, int dim, std::vector<Matrix> blocks)
    : shape_(std::move(shape)), dim_(dim), blocks_(std::move(blocks)) {}

ModuleVector::ModuleVector(AlgebraShape shape, std::vector<AlgebraElement> coords)
    : shape_(std::move(shape)), dim_(static_cast<int>(coords.size())) {
  if (dim_ < 1) throw DimensionMismatch("module vector needs at least one coordinate");
  blocks_.reserve(idx(shape_.num_blocks()));
  for (int k = 0; k < shape_.num_blocks(); ++k) {
    const int n = shape_.block_dim(k);
    Matrix b(dim_ * n, n);
    for (int i = 0; i < dim_; ++i) {
      require_same_shape(shape_, coords[idx(i)].shape(), "module vector coordinate");
      b.middleRows(i * n, n) = coords[idx(i)].block(k);
    }
    blocks_.push_back(std::move(b));
  }
}

ModuleVector ModuleVector::from_blocks(AlgebraShape shape, int dim, std::vector<Matrix> blocks) {
  if (dim < 1) throw DimensionMismatch("module vector needs at least one coordinate");
  if (static_cast<int>(blocks.size()) != shape.num_blocks()) throw ShapeMismatch("module vector: wrong block count");
  for (int k = 0; k < shape.num_blocks(); ++k) {
    const int n = shape.block_dim(k);
    if (blocks[idx(k)].rows() != dim * n || blocks[idx(k)].cols() != n)
      throw ShapeMismatch("module vector: block " + std::to_string(k) + " has the wrong size");
    if (!blocks[idx(k)].allFinite()) throw ShapeMismatch("module vector: non-finite entries");
  }
  return ModuleVector(std::move(shape), dim, std::move(blocks));
}

ModuleVector ModuleVector::zero(const AlgebraShape& shape, int dim) {
  if (dim < 1) throw DimensionMismatch("module vector needs at least one coordinate");
  std::vector<Matrix> blocks;
  for (int n : shape.block_dims()) blocks.push_back(Matrix::Zero(dim * n, n));
  return ModuleVector(shape, dim, std::move(blocks));
}

ModuleVector ModuleVector::basis(const AlgebraShape& shape, int dim, int j) {
  if (j < 0 || j >= dim) throw IndexOutOfRange("basis index " + std::to_string(j) + " outside A^" + std::to_string(dim));
  ModuleVector e = zero(shape, dim);
  for (int k = 0; k < shape.num_blocks(); ++k) {
    const int n = shape.block_dim(k);
    e.blocks_[idx(k)].middleRows(j * n, n).setIdentity();
  }
  return e;
}

AlgebraElement ModuleVector::coord(int i) const {
  if (i < 0 || i >= dim_) throw IndexOutOfRange("coordinate " + std::to_string(i));
  std::vector<Matrix> b;
  b.reserve(blocks_.size());
  for (int k = 0; k < shape_.num_blocks(); ++k) {
    const int n = shape_.block_dim(k);
    b.push_back(blocks_[idx(k)].middleRows(i * n, n));
  }
  return AlgebraElement(shape_, std::move(b));
}

std::vector<AlgebraElement> ModuleVector::coords() const {
  std::vector<AlgebraElement> out;
  out.reserve(idx(dim_));
  for (int i = 0; i < dim_; ++i) out.push_back(coord(i));
  return out;
}

void require_compatible(const ModuleVector& x, const ModuleVector& y, const char* where) {
  require_same_shape(x.shape(), y.shape(), where);
  if (x.dim() != y.dim())
    throw DimensionMismatch(std::string(where) + ": dimensions " + std::to_string(x.dim()) + " and " +
                            std::to_string(y.dim()));
}

ModuleVector& ModuleVector::operator+=(const ModuleVector& other) {
  require_compatible(*this, other, "module +");
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += other.blocks_[k];
  return *this;
}

ModuleVector& ModuleVector::operator-=(const ModuleVector& other) {
  require_compatible(*this, other, "module -");
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= other.blocks_[k];
  return *this;
}

ModuleVector& ModuleVector::operator*=(Complex s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

ModuleVector operator*(const ModuleVector& x, const AlgebraElement& a) {
  require_same_shape(x.shape_, a.shape(), "module action");
  std::vector<Matrix> blocks;
  blocks.reserve(x.blocks_.size());
  for (std::size_t k = 0; k < x.blocks_.size(); ++k) blocks.push_back(x.blocks_[k] * a.blocks()[k]);
  return ModuleVector(x.shape_, x.dim_, std::move(blocks));
}

AlgebraElement inner(const ModuleVector& x, const ModuleVector& y) {
  require_compatible(x, y, "inner product");
  std::vector<Matrix> blocks;
  blocks.reserve(x.blocks().size());
  for (std::size_t k = 0; k < x.blocks().size(); ++k) blocks.push_back(x.blocks()[k].adjoint() * y.blocks()[k]);
  return AlgebraElement(x.shape(), std::move(blocks));
}

double norm(const ModuleVector& x) {
  return max_block_norm(x.blocks());
}

// -------------------------------------------------------------- operators

ModuleOperator::ModuleOperator(AlgebraShape shape, int target_dim, int source_dim, std::vector<Matrix> blocks, bool)
    : shape_(std::move(shape)), target_dim_(target_dim), source_dim_(source_dim), blocks_(std::move(blocks)) {}

ModuleOperator::ModuleOperator(AlgebraShape shape, int target_dim, int source_dim, std::vector<AlgebraElement> entries)
    : shape_(std::move(shape)), target_dim_(target_dim), source_dim_(source_dim) {
  if (target_dim < 1 || source_dim < 1) throw DimensionMismatch("operator dimensions must be positive");
  if (static_cast<int>(entries.size()) != target_dim * source_dim)
    throw DimensionMismatch("operator needs " + std::to_string(target_dim * source_dim) + " entries");
  for (int k = 0; k < shape_.num_blocks(); ++k) {
    const int n = shape_.block_dim(k);
    Matrix b(target_dim * n, source_dim * n);
    for (int i = 0; i < target_dim; ++i) {
      for (int j = 0; j < source_dim; ++j) {
        const auto& e = entries[idx(i * source_dim + j)];
        require_same_shape(shape_, e.shape(), "operator entry");
        b.block(i * n, j * n, n, n) = e.block(k);
      }
    }
    blocks_.push_back(std::move(b));
  }
}

ModuleOperator ModuleOperator::from_blocks(AlgebraShape shape, int target_dim, int source_dim,
                                           std::vector<Matrix> blocks) {
  if (target_dim < 1 || source_dim < 1) throw DimensionMismatch("operator dimensions must be positive");
  if (static_cast<int>(blocks.size()) != shape.num_blocks()) throw ShapeMismatch("operator: wrong block count");
  for (int k = 0; k < shape.num_blocks(); ++k) {
    const int n = shape.block_dim(k);
    if (blocks[idx(k)].rows() != target_dim * n || blocks[idx(k)].cols() != source_dim * n)
      throw ShapeMismatch("operator: block " + std::to_string(k) + " has the wrong size");
    if (!blocks[idx(k)].allFinite()) throw ShapeMismatch("operator: non-finite entries");
  }
  return ModuleOperator(std::move(shape), target_dim, source_dim, std::move(blocks), true);
}

ModuleOperator ModuleOperator::identity(const AlgebraShape& shape, int dim) {
  if (dim < 1) throw DimensionMismatch("operator dimensions must be positive");
  std::vector<Matrix> blocks;
  for (int n : shape.block_dims()) blocks.push_back(Matrix::Identity(dim * n, dim * n));
  return ModuleOperator(shape, dim, dim, std::move(blocks), true);
}

ModuleOperator ModuleOperator::zero(const AlgebraShape& shape, int target_dim, int source_dim) {
  if (target_dim < 1 || source_dim < 1) throw DimensionMismatch("operator dimensions must be positive");
  std::vector<Matrix> blocks;
  for (int n : shape.block_dims()) blocks.push_back(Matrix::Zero(target_dim * n, source_dim * n));
  return ModuleOperator(shape, target_dim, source_dim, std::move(blocks), true);
}

AlgebraElement ModuleOperator::entry(int i, int j) const {
  if (i < 0 || i >= target_dim_ || j < 0 || j >= source_dim_)
    throw IndexOutOfRange("operator entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
  std::vector<Matrix> b;
  for (int k = 0; k < shape_.num_blocks(); ++k) {
    const int n = shape_.block_dim(k);
    b.push_back(blocks_[idx(k)].block(i * n, j * n, n, n));
  }
  return AlgebraElement(shape_, std::move(b));
}

ModuleOperator ModuleOperator::adjoint() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) blocks.push_back(b.adjoint());
  return ModuleOperator(shape_, source_dim_, target_dim_, std::move(blocks), true);
}

ModuleVector ModuleOperator::operator()(const ModuleVector& x) const {
  require_same_shape(shape_, x.shape(), "operator application");
  if (x.dim() != source_dim_)
    throw DimensionMismatch("operator with source A^" + std::to_string(source_dim_) + " applied to A^" +
                            std::to_string(x.dim()));
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks.push_back(blocks_[k] * x.blocks()[k]);
  return ModuleVector::from_blocks(shape_, target_dim_, std::move(blocks));
}

ModuleOperator& ModuleOperator::operator+=(const ModuleOperator& other) {
  require_same_shape(shape_, other.shape_, "operator +");
  if (other.target_dim_ != target_dim_ || other.source_dim_ != source_dim_)
    throw DimensionMismatch("operator +: dimensions differ");
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += other.blocks_[k];
  return *this;
}

ModuleOperator& ModuleOperator::operator-=(const ModuleOperator& other) {
  require_same_shape(shape_, other.shape_, "operator -");
  if (other.target_dim_ != target_dim_ || other.source_dim_ != source_dim_)
    throw DimensionMismatch("operator -: dimensions differ");
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= other.blocks_[k];
  return *this;
}

ModuleOperator& ModuleOperator::operator*=(Complex s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

ModuleOperator operator*(const ModuleOperator& a, const ModuleOperator& b) {
  require_same_shape(a.shape_, b.shape_, "operator composition");
  if (a.source_dim_ != b.target_dim_) throw DimensionMismatch("operator composition: inner dimensions differ");
  std::vector<Matrix> blocks;
  blocks.reserve(a.blocks_.size());
  for (std::size_t k = 0; k < a.blocks_.size(); ++k) blocks.push_back(a.blocks_[k] * b.blocks_[k]);
  return ModuleOperator(a.shape_, a.target_dim_, b.source_dim_, std::move(blocks), true);
}

double norm(const ModuleOperator& t) {
  return max_block_norm(t.blocks());
}

ModuleOperator theta(const ModuleVector& x, const ModuleVector& y) {
  require_same_shape(x.shape(), y.shape(), "theta");
  std::vector<Matrix> blocks;
  blocks.reserve(x.blocks().size());
  for (std::size_t k = 0; k < x.blocks().size(); ++k) blocks.push_back(x.blocks()[k] * y.blocks()[k].adjoint());
  return ModuleOperator::from_blocks(x.shape(), x.dim(), y.dim(), std::move(blocks));
}

ModuleOperator theta(const ModuleVector& x, const Functional& f) {
  return theta(x, f.representing);
}

ModuleOperator coordinate_projection(const AlgebraShape& shape, int dim, int begin, int end) {
  if (begin < 0 || end > dim || begin > end)
    throw IndexOutOfRange("coordinate window [" + std::to_string(begin) + "," + std::to_string(end) + ") outside A^" +
                          std::to_string(dim));
  std::vector<Matrix> blocks;
  for (int n : shape.block_dims()) {
    Matrix b = Matrix::Zero(dim * n, dim * n);
    b.block(begin * n, begin * n, (end - begin) * n, (end - begin) * n).setIdentity();
    blocks.push_back(std::move(b));
  }
  return ModuleOperator::from_blocks(shape, dim, dim, std::move(blocks));
}

ModuleOperator range_projection(const ModuleOperator& t, double tol) {
  const double floor = tol * std::max(norm(t), 1e-300);
  std::vector<Matrix> blocks;
  for (const auto& b : t.blocks()) {
    const Matrix u = range_basis(b, floor);
    blocks.push_back(u * u.adjoint());
  }
  return ModuleOperator::from_blocks(t.shape(), t.target_dim(), t.target_dim(), std::move(blocks));
}

ModuleOperator span_projection(std::span<const ModuleVector> generators, double tol) {
  if (generators.empty()) throw DimensionMismatch("span_projection: no generators, use the shape/dim overload");
  return span_projection(generators.front().shape(), generators.front().dim(), generators, tol);
}

ModuleOperator span_projection(const AlgebraShape& shape, int dim, std::span<const ModuleVector> generators,
                               double tol) {
  double scale = 0.0;
  for (const auto& g : generators) {
    require_same_shape(shape, g.shape(), "span_projection");
    if (g.dim() != dim) throw DimensionMismatch("span_projection: generator dimension");
    scale = std::max(scale, norm(g));
  }
  const double floor = tol * std::max(scale, 1e-300);
  std::vector<Matrix> blocks;
  for (int k = 0; k < shape.num_blocks(); ++k) {
    const int n = shape.block_dim(k);
    Matrix g(dim * n, static_cast<Eigen::Index>(generators.size()) * n);
    for (std::size_t j = 0; j < generators.size(); ++j) g.middleCols(static_cast<Eigen::Index>(j) * n, n) = generators[j].block(k);
    const Matrix u = range_basis(g, floor);
    blocks.push_back(u * u.adjoint());
  }
  return ModuleOperator::from_blocks(shape, dim, dim, std::move(blocks));
}

// ------------------------------------------------------------ submodules

SubmodulePresentation::SubmodulePresentation(ModuleOperator projection, double tol)
    : projection_(std::move(projection)) {
  if (projection_.source_dim() != projection_.target_dim())
    throw InvalidProjection("projection must be an endomorphism");
  const double self_adj = norm(projection_ - projection_.adjoint());
  const double idem = norm(projection_ * projection_ - projection_);
  if (self_adj > tol || idem > tol)
    throw InvalidProjection("not an orthogonal projection: ||P-P*|| = " + std::to_string(self_adj) +
                            ", ||P^2-P|| = " + std::to_string(idem));
}

SubmodulePresentation SubmodulePresentation::whole(const AlgebraShape& shape, int dim) {
  return SubmodulePresentation(ModuleOperator::identity(shape, dim));
}

// --------------------------------------------------------- least squares

namespace {

ModuleOperator synthesis_of(const std::vector<ModuleVector>& gens) {
  const AlgebraShape& shape = gens.front().shape();
  const int dim = gens.front().dim();
  const int s = static_cast<int>(gens.size());
  std::vector<Matrix> blocks;
  for (int k = 0; k < shape.num_blocks(); ++k) {
    const int n = shape.block_dim(k);
    Matrix g(dim * n, s * n);
    for (int j = 0; j < s; ++j) g.middleCols(j * n, n) = gens[idx(j)].block(k);
    blocks.push_back(std::move(g));
  }
  return ModuleOperator::from_blocks(shape, dim, s, std::move(blocks));
}

const std::vector<ModuleVector>& checked(const std::vector<ModuleVector>& gens) {
  if (gens.empty()) throw DimensionMismatch("span solver needs at least one generator");
  for (const auto& g : gens) require_compatible(gens.front(), g, "span solver generators");
  return gens;
}

}  // namespace

SpanSolver::SpanSolver(std::vector<ModuleVector> generators, double tol)
    : generators_(std::move(generators)), synthesis_(synthesis_of(checked(generators_))) {
  const double scale = std::max(norm(synthesis_), 1e-300);
  double smallest = std::numeric_limits<double>::infinity();
  for (const auto& g : synthesis_.blocks()) {
    Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > tol * scale) ++r;
    if (r > 0) smallest = std::min(smallest, sv(r - 1));
    pinv_.push_back(svd.matrixV().leftCols(r) * sv.head(r).cwiseInverse().asDiagonal() *
                    svd.matrixU().leftCols(r).adjoint());
  }
  inverse_bound_ = std::isfinite(smallest) ? 1.0 / smallest : 0.0;
}

SpanSolver::Fit SpanSolver::fit(const ModuleVector& x) const {
  require_compatible(generators_.front(), x, "span fit");
  const AlgebraShape& shape = x.shape();
  const int s = static_cast<int>(generators_.size());
  std::vector<Matrix> coeff_blocks;
  std::vector<Matrix> approx_blocks;
  for (int k = 0; k < shape.num_blocks(); ++k) {
    Matrix c = pinv_[idx(k)] * x.block(k);
    approx_blocks.push_back(synthesis_.block(k) * c);
    coeff_blocks.push_back(std::move(c));
  }
  std::vector<AlgebraElement> coefficients;
  double coefficient_norm = 0.0;
  for (int j = 0; j < s; ++j) {
    std::vector<Matrix> b;
    for (int k = 0; k < shape.num_blocks(); ++k) {
      const int n = shape.block_dim(k);
      b.push_back(coeff_blocks[idx(k)].middleRows(j * n, n));
    }
    coefficients.emplace_back(shape, std::move(b));
    coefficient_norm = std::max(coefficient_norm, norm(coefficients.back()));
  }
  const double tuple_norm = max_block_norm(coeff_blocks);
  ModuleVector approximant = ModuleVector::from_blocks(shape, x.dim(), std::move(approx_blocks));
  const double residual = norm(x - approximant);
  return Fit{std::move(coefficients), std::move(approximant), residual, coefficient_norm, tuple_norm};
}

// ------------------------------------------------------- orthonormalize

std::vector<ModuleVector> orthonormalize(std::span<const ModuleVector> generators, double tol) {
  std::vector<ModuleVector> out;
  if (generators.empty()) return out;
  const AlgebraShape& shape = generators.front().shape();
  const int dim = generators.front().dim();
  double scale = 0.0;
  for (const auto& g : generators) {
    require_compatible(generators.front(), g, "orthonormalize");
    scale = std::max(scale, norm(g));
  }
  if (scale == 0.0) return out;
  const double floor = tol * scale;

  std::vector<Matrix> proj;
  for (int n : shape.block_dims()) proj.push_back(Matrix::Zero(dim * n, dim * n));

  for (const auto& g : generators) {
    std::vector<Matrix> w;
    bool any = false;
    for (int k = 0; k < shape.num_blocks(); ++k) {
      const int n = shape.block_dim(k);
      Matrix r = g.block(k) - proj[idx(k)] * g.block(k);
      r -= proj[idx(k)] * r;  // second pass restores orthogonality lost to rounding
      Eigen::JacobiSVD<Matrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const auto& sv = svd.singularValues();
      Eigen::Index rank = 0;
      while (rank < sv.size() && sv(rank) > floor) ++rank;
      if (rank == 0) {
        w.push_back(Matrix::Zero(dim * n, n));
        continue;
      }
      any = true;
      const Matrix u = svd.matrixU().leftCols(rank);
      w.push_back(u * svd.matrixV().leftCols(rank).adjoint());
      proj[idx(k)] += u * u.adjoint();
    }
    if (any) out.push_back(ModuleVector::from_blocks(shape, dim, std::move(w)));
  }
  return out;
}

std::vector<ModuleVector> coordinate_parseval_frame(const ModuleOperator& projection, double tol) {
  std::vector<ModuleVector> projected;
  const int dim = projection.source_dim();
  projected.reserve(idx(dim));
  for (int j = 0; j < dim; ++j) projected.push_back(projection(ModuleVector::basis(projection.shape(), dim, j)));
  return orthonormalize(projected, tol);
}

}  // namespace cstar
