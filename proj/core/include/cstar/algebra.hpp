#pragma once

// Finite-dimensional C*-algebras realized as direct sums of full matrix
// blocks, A = M_{n_1}(C) + ... + M_{n_K}(C). Elements are stored block by
// block; every norm and spectral quantity is computed on this faithful
// realization.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cstar/errors.hpp"

namespace cstar {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Relative tolerance used for positivity and rank decisions unless a caller
/// supplies its own.
inline constexpr double kDefaultTolerance = 1e-10;

class AlgebraShape {
 public:
  explicit AlgebraShape(std::vector<int> block_dims);

  /// C^k with k one-dimensional blocks.
  static AlgebraShape commutative(int k);

  int num_blocks() const noexcept { return static_cast<int>(dims_.size()); }
  int block_dim(int k) const { return dims_.at(static_cast<std::size_t>(k)); }
  const std::vector<int>& block_dims() const noexcept { return dims_; }
  /// Sum of the block dimensions.
  int realization_dim() const noexcept { return total_; }
  bool is_commutative() const noexcept;

  bool operator==(const AlgebraShape& other) const noexcept { return dims_ == other.dims_; }

 private:
  std::vector<int> dims_;
  int total_ = 0;
};

void require_same_shape(const AlgebraShape& a, const AlgebraShape& b, const char* where);

class AlgebraElement {
 public:
  /// Validates that block k is n_k x n_k and finite.
  AlgebraElement(AlgebraShape shape, std::vector<Matrix> blocks);

  static AlgebraElement zero(const AlgebraShape& shape);
  static AlgebraElement identity(const AlgebraShape& shape);
  /// Commutative shapes only: the element with the given coordinates.
  static AlgebraElement diagonal(const AlgebraShape& shape, std::span<const Complex> values);
  /// Central projection onto block k (the unit of that block, zero elsewhere).
  static AlgebraElement block_unit(const AlgebraShape& shape, int k);

  const AlgebraShape& shape() const noexcept { return shape_; }
  const Matrix& block(int k) const { return blocks_.at(static_cast<std::size_t>(k)); }
  const std::vector<Matrix>& blocks() const noexcept { return blocks_; }

  AlgebraElement adjoint() const;

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(Complex s);

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(AlgebraElement a, Complex s) { return a *= s; }
  friend AlgebraElement operator*(Complex s, AlgebraElement a) { return a *= s; }
  /// Blockwise matrix product.
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);

 private:
  AlgebraShape shape_;
  std::vector<Matrix> blocks_;
};

/// C*-norm: the largest singular value over all blocks.
double norm(const AlgebraElement& a);

bool is_self_adjoint(const AlgebraElement& a, double tol = kDefaultTolerance);

/// Smallest eigenvalue over all blocks of the Hermitian part (a + a*)/2.
double min_eigenvalue(const AlgebraElement& a);
double max_eigenvalue(const AlgebraElement& a);

/// True iff every eigenvalue of every block is >= -tol*||a||. Throws
/// NotSelfAdjoint when a is not self-adjoint within tol*||a||.
bool is_positive(const AlgebraElement& a, double tol = kDefaultTolerance);

/// Throws SingularElement when some block singular value is below
/// tol times the largest singular value of a.
AlgebraElement inverse(const AlgebraElement& a, double tol = kDefaultTolerance);

/// Positive square root by spectral calculus. Throws NotPositive.
AlgebraElement sqrt(const AlgebraElement& a, double tol = kDefaultTolerance);

/// A state phi(a) = sum_k trace(rho_k a_k) given by block density matrices.
class State {
 public:
  /// Validates PSD densities with total trace one (both within tol).
  State(AlgebraShape shape, std::vector<Matrix> densities, double tol = kDefaultTolerance);

  /// Normalized trace of block k (point evaluation when n_k = 1).
  static State point(const AlgebraShape& shape, int k);
  /// Normalized trace of the whole realization.
  static State tracial(const AlgebraShape& shape);
  /// Vector state a -> <u, a_k u> for a unit vector u of block k.
  static State vector_state(const AlgebraShape& shape, int k, const Vector& u);

  const AlgebraShape& shape() const noexcept { return shape_; }
  const std::vector<Matrix>& densities() const noexcept { return densities_; }

  Complex operator()(const AlgebraElement& a) const;

 private:
  AlgebraShape shape_;
  std::vector<Matrix> densities_;
};

/// A vector state that attains phi(a) = ||a|| whenever a is positive, built
/// from the leading eigenvector of a*a. Ties go to the lowest block index; the
/// eigenvector phase is fixed so its first nonzero component is real positive.
State norming_state(const AlgebraElement& a);

}  // namespace cstar
