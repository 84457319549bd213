#pragma once

// Reference computations for the tests. They work on plain Eigen matrices,
// or on point evaluations in the commutative case, and never go through the
// library's block storage.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cstar/module.hpp"

namespace oracle {

using cstar::Complex;
using cstar::Matrix;

/// Eigenvalues of a 2x2 Hermitian matrix in closed form, ascending.
inline std::pair<double, double> hermitian2_eigs(const Matrix& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const double b = std::abs(h(0, 1));
  const double mid = (a + d) / 2.0;
  const double rad = std::sqrt((a - d) * (a - d) / 4.0 + b * b);
  return {mid - rad, mid + rad};
}

/// Largest singular value of a 1x1 or 2x2 matrix from closed forms.
inline double small_spectral_norm(const Matrix& m) {
  if (m.rows() == 1) return std::abs(m(0, 0));
  const Matrix g = m.adjoint() * m;
  return std::sqrt(std::max(0.0, hermitian2_eigs(g).second));
}

/// Coordinates of x at point n of a commutative algebra, as a vector of C^dim.
inline Eigen::VectorXcd at_point(const cstar::ModuleVector& x, int n) {
  Eigen::VectorXcd v(x.dim());
  for (int i = 0; i < x.dim(); ++i) v(i) = x.coord(i).block(n)(0, 0);
  return v;
}

/// ||x|| for a commutative algebra: sup over points of the Euclidean norm.
inline double commutative_norm(const cstar::ModuleVector& x) {
  double best = 0.0;
  for (int n = 0; n < x.shape().num_blocks(); ++n) best = std::max(best, at_point(x, n).norm());
  return best;
}

/// dist(x, Span_A(gens)) for a commutative algebra: sup over points of the
/// Euclidean distance to the span of the generators' values, by
/// complete-orthogonal decomposition.
inline double commutative_distance(const cstar::ModuleVector& x, const std::vector<cstar::ModuleVector>& gens) {
  double best = 0.0;
  for (int n = 0; n < x.shape().num_blocks(); ++n) {
    Matrix g(x.dim(), static_cast<Eigen::Index>(gens.size()));
    for (std::size_t k = 0; k < gens.size(); ++k) g.col(static_cast<Eigen::Index>(k)) = at_point(gens[k], n);
    const Eigen::VectorXcd v = at_point(x, n);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(g);
    cod.setThreshold(1e-12);
    const Eigen::VectorXcd c = cod.solve(v);
    best = std::max(best, (v - g * c).norm());
  }
  return best;
}

/// Smallest eigenvalue over blocks of a self-adjoint algebra element.
inline double min_eig(const cstar::AlgebraElement& a) {
  double lo = INFINITY;
  for (const auto& b : a.blocks()) {
    const Matrix h = (b + b.adjoint()) / 2.0;
    lo = std::min(lo, Eigen::SelfAdjointEigenSolver<Matrix>(h).eigenvalues().minCoeff());
  }
  return lo;
}

/// sum_j <x, x_j><x_j, x> from the definition.
inline cstar::AlgebraElement frame_sum(const std::vector<cstar::ModuleVector>& family, const cstar::ModuleVector& x) {
  cstar::AlgebraElement s = cstar::AlgebraElement::zero(x.shape());
  for (const auto& xj : family) s += cstar::inner(x, xj) * cstar::inner(xj, x);
  return s;
}

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace oracle
