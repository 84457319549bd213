#pragma once

// Free Hilbert modules A^n over a block algebra, their A-valued inner
// product, adjointable operators in matrix form, and the elementary
// finite-rank operators theta_{x,f}.
//
// Storage follows the faithful realization: for algebra block k (size n_k) a
// vector x in A^n is the (n*n_k) x n_k matrix obtained by stacking the k-th
// blocks of its coordinates, and an operator A^n -> A^m is the
// (m*n_k) x (n*n_k) block matrix of its entries. Then <x,y>_k = X_k^* Y_k,
// ||x|| = max_k sigma_max(X_k) and ||T|| = max_k sigma_max(T_k).

#include <span>
#include <vector>

#include "cstar/algebra.hpp"

namespace cstar {

class ModuleVector {
 public:
  ModuleVector(AlgebraShape shape, std::vector<AlgebraElement> coords);
  /// blocks[k] must be (dim*n_k) x n_k.
  static ModuleVector from_blocks(AlgebraShape shape, int dim, std::vector<Matrix> blocks);
  static ModuleVector zero(const AlgebraShape& shape, int dim);
  /// Standard basis vector e_j (0-based): identity in coordinate j.
  static ModuleVector basis(const AlgebraShape& shape, int dim, int j);

  const AlgebraShape& shape() const noexcept { return shape_; }
  int dim() const noexcept { return dim_; }
  AlgebraElement coord(int i) const;
  std::vector<AlgebraElement> coords() const;
  const Matrix& block(int k) const { return blocks_.at(static_cast<std::size_t>(k)); }
  const std::vector<Matrix>& blocks() const noexcept { return blocks_; }

  ModuleVector& operator+=(const ModuleVector& other);
  ModuleVector& operator-=(const ModuleVector& other);
  ModuleVector& operator*=(Complex s);

  friend ModuleVector operator+(ModuleVector x, const ModuleVector& y) { return x += y; }
  friend ModuleVector operator-(ModuleVector x, const ModuleVector& y) { return x -= y; }
  friend ModuleVector operator*(ModuleVector x, Complex s) { return x *= s; }
  friend ModuleVector operator*(Complex s, ModuleVector x) { return x *= s; }
  /// Right module action x.a.
  friend ModuleVector operator*(const ModuleVector& x, const AlgebraElement& a);

 private:
  ModuleVector(AlgebraShape shape, int dim, std::vector<Matrix> blocks);

  AlgebraShape shape_;
  int dim_;
  std::vector<Matrix> blocks_;
};

void require_compatible(const ModuleVector& x, const ModuleVector& y, const char* where);

/// <x,y> = sum_i x_i^* y_i.
AlgebraElement inner(const ModuleVector& x, const ModuleVector& y);

/// ||x|| = ||<x,x>||^{1/2}.
double norm(const ModuleVector& x);

/// A-linear operator A^n -> A^m given by an m x n matrix of algebra elements,
/// acting by T(x)_i = sum_j T_ij x_j.
class ModuleOperator {
 public:
  /// entries are row-major, target_dim * source_dim of them.
  ModuleOperator(AlgebraShape shape, int target_dim, int source_dim, std::vector<AlgebraElement> entries);
  static ModuleOperator from_blocks(AlgebraShape shape, int target_dim, int source_dim, std::vector<Matrix> blocks);
  static ModuleOperator identity(const AlgebraShape& shape, int dim);
  static ModuleOperator zero(const AlgebraShape& shape, int target_dim, int source_dim);

  const AlgebraShape& shape() const noexcept { return shape_; }
  int source_dim() const noexcept { return source_dim_; }
  int target_dim() const noexcept { return target_dim_; }
  AlgebraElement entry(int i, int j) const;
  const Matrix& block(int k) const { return blocks_.at(static_cast<std::size_t>(k)); }
  const std::vector<Matrix>& blocks() const noexcept { return blocks_; }

  /// Entrywise adjoint of the transpose; <T* y, x> = <y, T x>.
  ModuleOperator adjoint() const;
  ModuleVector operator()(const ModuleVector& x) const;

  ModuleOperator& operator+=(const ModuleOperator& other);
  ModuleOperator& operator-=(const ModuleOperator& other);
  ModuleOperator& operator*=(Complex s);

  friend ModuleOperator operator+(ModuleOperator a, const ModuleOperator& b) { return a += b; }
  friend ModuleOperator operator-(ModuleOperator a, const ModuleOperator& b) { return a -= b; }
  friend ModuleOperator operator*(ModuleOperator a, Complex s) { return a *= s; }
  friend ModuleOperator operator*(Complex s, ModuleOperator a) { return a *= s; }
  /// Composition (a after b).
  friend ModuleOperator operator*(const ModuleOperator& a, const ModuleOperator& b);

 private:
  ModuleOperator(AlgebraShape shape, int target_dim, int source_dim, std::vector<Matrix> blocks, bool);

  AlgebraShape shape_;
  int target_dim_;
  int source_dim_;
  std::vector<Matrix> blocks_;
};

/// Operator norm in M_{m,n}(A): the largest block spectral norm.
double norm(const ModuleOperator& t);

/// Bounded A-functional f(z) = <y, z>. Over the free finite modules handled
/// here every bounded functional has this form.
struct Functional {
  ModuleVector representing;

  AlgebraElement operator()(const ModuleVector& z) const { return inner(representing, z); }
  double norm() const { return cstar::norm(representing); }
  /// f o S for an operator S into the functional's module.
  Functional compose(const ModuleOperator& s) const { return Functional{s.adjoint()(representing)}; }
};

/// theta_{x,y}(z) = x <y, z>.
ModuleOperator theta(const ModuleVector& x, const ModuleVector& y);
/// theta_{x,f}(z) = x f(z).
ModuleOperator theta(const ModuleVector& x, const Functional& f);

/// Orthogonal projection Q onto the coordinates [begin, end) of A^dim.
ModuleOperator coordinate_projection(const AlgebraShape& shape, int dim, int begin, int end);

/// Orthogonal projection onto the closure of the range of t.
ModuleOperator range_projection(const ModuleOperator& t, double tol = kDefaultTolerance);

/// Orthogonal projection onto Span_A(generators). All generators must share
/// shape and dimension; an empty list needs the explicit shape/dim overload.
ModuleOperator span_projection(std::span<const ModuleVector> generators, double tol = kDefaultTolerance);
ModuleOperator span_projection(const AlgebraShape& shape, int dim, std::span<const ModuleVector> generators,
                               double tol = kDefaultTolerance);

/// A complemented submodule of A^n given by a self-adjoint idempotent.
class SubmodulePresentation {
 public:
  /// Throws InvalidProjection unless P = P* = P^2 within tol.
  explicit SubmodulePresentation(ModuleOperator projection, double tol = 1e-9);

  static SubmodulePresentation whole(const AlgebraShape& shape, int dim);

  const ModuleOperator& projection() const noexcept { return projection_; }
  int ambient_dim() const noexcept { return projection_.source_dim(); }
  ModuleVector project(const ModuleVector& x) const { return projection_(x); }

 private:
  ModuleOperator projection_;
};

/// Least-squares fitting onto Span_A(z_1..z_s), solved block by block with a
/// thresholded pseudo-inverse of the generator realization. The residual is
/// the exact distance to the span: per block it is the orthogonal projection
/// residual, which minimizes the spectral norm as well as the Frobenius norm.
class SpanSolver {
 public:
  struct Fit {
    std::vector<AlgebraElement> coefficients;
    ModuleVector approximant;
    double residual;
    /// max_k ||a_k||
    double coefficient_norm;
    /// ||(a_1..a_s)|| in A^s
    double tuple_norm;
  };

  explicit SpanSolver(std::vector<ModuleVector> generators, double tol = kDefaultTolerance);

  const std::vector<ModuleVector>& generators() const noexcept { return generators_; }
  Fit fit(const ModuleVector& x) const;

  /// The synthesis map G(a_1..a_s) = sum_k z_k a_k as an operator A^s -> A^n.
  const ModuleOperator& synthesis() const noexcept { return synthesis_; }

  /// Norm of the inverse of G restricted to the orthogonal complement of its
  /// kernel: 1 / smallest nonzero singular value, max over blocks.
  double inverse_bound() const noexcept { return inverse_bound_; }

 private:
  std::vector<ModuleVector> generators_;
  ModuleOperator synthesis_;
  std::vector<Matrix> pinv_;
  double inverse_bound_ = 0.0;
};

/// Module Gram-Schmidt. Returns w_1, w_2, ... such that the theta_{w_j,w_j}
/// are mutually orthogonal projections summing to the projection onto
/// Span_A(generators); generators already in the span of earlier ones are
/// dropped. The result is a Parseval frame of that span, in generator order.
std::vector<ModuleVector> orthonormalize(std::span<const ModuleVector> generators, double tol = kDefaultTolerance);

/// Parseval frame of the submodule Ran(projection) obtained by orthonormalizing
/// the projected standard basis P e_1, ..., P e_n in coordinate order.
std::vector<ModuleVector> coordinate_parseval_frame(const ModuleOperator& projection, double tol = kDefaultTolerance);

}  // namespace cstar
