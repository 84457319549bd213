#include "cstar/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cstar {
namespace {

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  const Matrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

bool all_finite(const Matrix& m) {
  return m.allFinite();
}

}  // namespace

AlgebraShape::AlgebraShape(std::vector<int> block_dims) : dims_(std::move(block_dims)) {
  if (dims_.empty()) throw ShapeMismatch("algebra shape needs at least one block");
  for (int n : dims_) {
    if (n < 1) throw ShapeMismatch("block dimensions must be positive, got " + std::to_string(n));
    total_ += n;
  }
}

AlgebraShape AlgebraShape::commutative(int k) {
  return AlgebraShape(std::vector<int>(static_cast<std::size_t>(std::max(k, 0)), 1));
}

bool AlgebraShape::is_commutative() const noexcept {
  return std::all_of(dims_.begin(), dims_.end(), [](int n) { return n == 1; });
}

void require_same_shape(const AlgebraShape& a, const AlgebraShape& b, const char* where) {
  if (!(a == b)) throw ShapeMismatch(std::string(where) + ": algebra shapes differ");
}

AlgebraElement::AlgebraElement(AlgebraShape shape, std::vector<Matrix> blocks)
    : shape_(std::move(shape)), blocks_(std::move(blocks)) {
  if (static_cast<int>(blocks_.size()) != shape_.num_blocks())
    throw ShapeMismatch("element has " + std::to_string(blocks_.size()) + " blocks, shape has " +
                        std::to_string(shape_.num_blocks()));
  for (int k = 0; k < shape_.num_blocks(); ++k) {
    const auto& b = blocks_[static_cast<std::size_t>(k)];
    const int n = shape_.block_dim(k);
    if (b.rows() != n || b.cols() != n)
      throw ShapeMismatch("block " + std::to_string(k) + " is " + std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()) + ", expected " + std::to_string(n) + "x" +
                          std::to_string(n));
    if (!all_finite(b)) throw ShapeMismatch("block " + std::to_string(k) + " has non-finite entries");
  }
}

AlgebraElement AlgebraElement::zero(const AlgebraShape& shape) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(shape.num_blocks()));
  for (int n : shape.block_dims()) blocks.push_back(Matrix::Zero(n, n));
  return AlgebraElement(shape, std::move(blocks));
}

AlgebraElement AlgebraElement::identity(const AlgebraShape& shape) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(shape.num_blocks()));
  for (int n : shape.block_dims()) blocks.push_back(Matrix::Identity(n, n));
  return AlgebraElement(shape, std::move(blocks));
}

AlgebraElement AlgebraElement::diagonal(const AlgebraShape& shape, std::span<const Complex> values) {
  if (!shape.is_commutative()) throw ShapeMismatch("diagonal(): shape is not commutative");
  if (static_cast<int>(values.size()) != shape.num_blocks())
    throw ShapeMismatch("diagonal(): expected " + std::to_string(shape.num_blocks()) + " values");
  std::vector<Matrix> blocks;
  blocks.reserve(values.size());
  for (Complex v : values) blocks.push_back(Matrix::Constant(1, 1, v));
  return AlgebraElement(shape, std::move(blocks));
}

AlgebraElement AlgebraElement::block_unit(const AlgebraShape& shape, int k) {
  if (k < 0 || k >= shape.num_blocks()) throw IndexOutOfRange("block index " + std::to_string(k));
  AlgebraElement e = zero(shape);
  e.blocks_[static_cast<std::size_t>(k)].setIdentity();
  return e;
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) blocks.push_back(b.adjoint());
  return AlgebraElement(shape_, std::move(blocks));
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  require_same_shape(shape_, other.shape_, "algebra +");
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += other.blocks_[k];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  require_same_shape(shape_, other.shape_, "algebra -");
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= other.blocks_[k];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_shape(a.shape_, b.shape_, "algebra *");
  std::vector<Matrix> blocks;
  blocks.reserve(a.blocks_.size());
  for (std::size_t k = 0; k < a.blocks_.size(); ++k) blocks.push_back(a.blocks_[k] * b.blocks_[k]);
  return AlgebraElement(a.shape_, std::move(blocks));
}

double norm(const AlgebraElement& a) {
  double n = 0.0;
  for (const auto& b : a.blocks()) n = std::max(n, spectral_norm(b));
  return n;
}

bool is_self_adjoint(const AlgebraElement& a, double tol) {
  const double scale = norm(a);
  for (const auto& b : a.blocks()) {
    if (spectral_norm(b - b.adjoint()) > tol * std::max(scale, 1e-300)) return false;
  }
  return true;
}

double min_eigenvalue(const AlgebraElement& a) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : a.blocks()) m = std::min(m, hermitian_eigenvalues(b).minCoeff());
  return m;
}

double max_eigenvalue(const AlgebraElement& a) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& b : a.blocks()) m = std::max(m, hermitian_eigenvalues(b).maxCoeff());
  return m;
}

bool is_positive(const AlgebraElement& a, double tol) {
  const double scale = norm(a);
  if (scale == 0.0) return true;
  if (!is_self_adjoint(a, tol)) throw NotSelfAdjoint("positivity test on a non-self-adjoint element");
  return min_eigenvalue(a) >= -tol * scale;
}

AlgebraElement inverse(const AlgebraElement& a, double tol) {
  const double scale = norm(a);
  std::vector<Matrix> blocks;
  blocks.reserve(a.blocks().size());
  for (std::size_t k = 0; k < a.blocks().size(); ++k) {
    const Matrix& b = a.blocks()[k];
    Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (scale == 0.0 || s(s.size() - 1) < tol * scale)
      throw SingularElement("block " + std::to_string(k) + " is singular (smallest singular value " +
                            std::to_string(s(s.size() - 1)) + ")");
    blocks.push_back(svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().adjoint());
  }
  return AlgebraElement(a.shape(), std::move(blocks));
}

AlgebraElement sqrt(const AlgebraElement& a, double tol) {
  if (!is_positive(a, tol)) throw NotPositive("square root of a non-positive element");
  std::vector<Matrix> blocks;
  blocks.reserve(a.blocks().size());
  for (const auto& b : a.blocks()) {
    const Matrix h = (b + b.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    blocks.push_back(es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint());
  }
  return AlgebraElement(a.shape(), std::move(blocks));
}

State::State(AlgebraShape shape, std::vector<Matrix> densities, double tol)
    : shape_(std::move(shape)), densities_(std::move(densities)) {
  if (static_cast<int>(densities_.size()) != shape_.num_blocks())
    throw InvalidState("state has " + std::to_string(densities_.size()) + " densities, shape has " +
                       std::to_string(shape_.num_blocks()) + " blocks");
  double trace = 0.0;
  for (int k = 0; k < shape_.num_blocks(); ++k) {
    const Matrix& rho = densities_[static_cast<std::size_t>(k)];
    const int n = shape_.block_dim(k);
    if (rho.rows() != n || rho.cols() != n)
      throw InvalidState("density " + std::to_string(k) + " has the wrong size");
    if (!rho.allFinite()) throw InvalidState("density " + std::to_string(k) + " is not finite");
    if (spectral_norm(rho - rho.adjoint()) > tol)
      throw InvalidState("density " + std::to_string(k) + " is not Hermitian");
    if (hermitian_eigenvalues(rho).minCoeff() < -tol)
      throw InvalidState("density " + std::to_string(k) + " is not positive semidefinite");
    trace += rho.trace().real();
  }
  if (std::abs(trace - 1.0) > tol)
    throw InvalidState("densities have total trace " + std::to_string(trace) + ", expected 1");
}

State State::point(const AlgebraShape& shape, int k) {
  if (k < 0 || k >= shape.num_blocks()) throw IndexOutOfRange("state block " + std::to_string(k));
  std::vector<Matrix> d;
  for (int j = 0; j < shape.num_blocks(); ++j) {
    const int n = shape.block_dim(j);
    d.push_back(j == k ? Matrix(Matrix::Identity(n, n) / static_cast<double>(n)) : Matrix(Matrix::Zero(n, n)));
  }
  return State(shape, std::move(d));
}

State State::tracial(const AlgebraShape& shape) {
  std::vector<Matrix> d;
  const double total = shape.realization_dim();
  for (int n : shape.block_dims()) d.push_back(Matrix::Identity(n, n) / total);
  return State(shape, std::move(d));
}

State State::vector_state(const AlgebraShape& shape, int k, const Vector& u) {
  if (k < 0 || k >= shape.num_blocks()) throw IndexOutOfRange("state block " + std::to_string(k));
  if (u.size() != shape.block_dim(k)) throw InvalidState("vector state: wrong vector length");
  const double nu = u.norm();
  if (!(nu > 0.0)) throw InvalidState("vector state: zero vector");
  std::vector<Matrix> d;
  for (int j = 0; j < shape.num_blocks(); ++j) {
    const int n = shape.block_dim(j);
    d.push_back(j == k ? Matrix((u / nu) * (u / nu).adjoint()) : Matrix(Matrix::Zero(n, n)));
  }
  return State(shape, std::move(d));
}

Complex State::operator()(const AlgebraElement& a) const {
  require_same_shape(shape_, a.shape(), "state evaluation");
  Complex sum = 0.0;
  for (std::size_t k = 0; k < densities_.size(); ++k) sum += (densities_[k] * a.blocks()[k]).trace();
  return sum;
}

State norming_state(const AlgebraElement& a) {
  const AlgebraShape& shape = a.shape();
  int best_block = 0;
  double best = -1.0;
  for (int k = 0; k < shape.num_blocks(); ++k) {
    const double s = spectral_norm(a.block(k));
    // strict comparison keeps the lowest block index on ties
    if (s > best * (1.0 + 1e-12) + 1e-300) {
      best = s;
      best_block = k;
    }
  }
  const Matrix& b = a.block(best_block);
  const Matrix gram = b.adjoint() * b;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  Vector u = es.eigenvectors().col(gram.cols() - 1);
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) > 1e-14) {
      u *= std::conj(u(i)) / std::abs(u(i));
      break;
    }
  }
  return State::vector_state(shape, best_block, u);
}

}  // namespace cstar
