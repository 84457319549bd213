#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cstar/module.hpp"

namespace cstar {

/// Which submodule a family is a frame for.
enum class FrameScope {
  /// The whole ambient module A^n. A family that does not span is rejected.
  Ambient,
  /// The submodule generated by the family itself. The inverse of the frame
  /// operator is taken on its range.
  Span,
};

struct FrameBounds {
  double lower;
  double upper;
};

/// A finite standard frame {x_j} with its frame operator S = Theta* Theta,
/// optimal bounds c1 <= S <= c2 (extreme eigenvalues of the realized S on the
/// framed submodule) and canonical dual g_j = S^{-1} x_j. Everything is
/// computed once at construction; afterwards the object is read-only.
class Frame {
 public:
  /// Throws NotAFrame for an empty family or (numerically) zero lower bound.
  static Frame build(std::vector<ModuleVector> vectors, FrameScope scope = FrameScope::Ambient,
                     double tol = kDefaultTolerance);

  const std::vector<ModuleVector>& vectors() const noexcept { return vectors_; }
  std::size_t size() const noexcept { return vectors_.size(); }
  const AlgebraShape& shape() const noexcept { return vectors_.front().shape(); }
  int dim() const noexcept { return vectors_.front().dim(); }
  FrameScope scope() const noexcept { return scope_; }

  /// Theta: x -> (<x_j, x>)_j, an operator A^n -> A^L.
  const ModuleOperator& analysis() const noexcept { return analysis_; }
  /// Theta*: (a_j) -> sum_j x_j a_j.
  ModuleOperator synthesis() const { return analysis_.adjoint(); }
  const ModuleOperator& frame_operator() const noexcept { return frame_operator_; }
  /// Inverse of S on the framed submodule (zero on its complement).
  const ModuleOperator& frame_operator_inverse() const noexcept { return frame_operator_inverse_; }
  /// Orthogonal projection onto the framed submodule (identity for Ambient).
  const ModuleOperator& submodule_projection() const noexcept { return projection_; }

  FrameBounds bounds() const noexcept { return bounds_; }
  const std::vector<ModuleVector>& dual() const noexcept { return dual_; }

  /// P_{J'}(x) = sum_{j in J'} x_j <g_j, x>. Throws IndexOutOfRange.
  ModuleOperator partial_sum(std::span<const std::size_t> indices) const;
  /// Same operator assembled as Theta* o pi_{J'} o Theta o S^{-1}.
  ModuleOperator partial_sum_factored(std::span<const std::size_t> indices) const;
  /// P_{{0..n-1}}.
  ModuleOperator prefix_sum(std::size_t n) const;

  /// sum_{j<n} x_j <g_j, x>.
  ModuleVector reconstruct(const ModuleVector& x, std::size_t n) const;
  /// ||x - sum_{j<n} x_j <g_j, x>||. Throws IndexOutOfRange for n > size().
  double reconstruction_tail(const ModuleVector& x, std::size_t n) const;
  /// Tails for every prefix length n = 0..size().
  std::vector<double> tail_profile(const ModuleVector& x) const;

 private:
  Frame(std::vector<ModuleVector> vectors, FrameScope scope, ModuleOperator analysis, ModuleOperator frame_operator,
        ModuleOperator inverse, ModuleOperator projection, FrameBounds bounds, std::vector<ModuleVector> dual);

  std::vector<ModuleVector> vectors_;
  FrameScope scope_;
  ModuleOperator analysis_;
  ModuleOperator frame_operator_;
  ModuleOperator frame_operator_inverse_;
  ModuleOperator projection_;
  FrameBounds bounds_;
  std::vector<ModuleVector> dual_;
};

}  // namespace cstar
