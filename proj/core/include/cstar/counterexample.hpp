#pragma once

// Truncated model of a non-precompact image F(B) that is nonetheless
// approximable by multiples of a single generator. The algebra of convergent
// sequences is cut to C^{N+1}: blocks 0..N-1 are the points 1..N and block N
// is the limit point. The module is A^M with M <= N, F(x)_k = delta^k x_k and
// v = sum_j (1/j!) e_j delta^j. Indices k, j below are 1-based as in the
// sequence model.

#include <optional>
#include <vector>

#include "cstar/frame.hpp"
#include "cstar/sampling.hpp"

namespace cstar {

struct TruncatedCSetting {
  /// Throws Error unless 1 <= dim <= trunc.
  TruncatedCSetting(int trunc, int dim);

  int trunc;  // N
  int dim;    // M
  AlgebraShape shape;
  ModuleOperator f;
  ModuleVector v;

  /// The sequence that is 1 at point j (1 <= j <= N) and 0 elsewhere,
  /// including the limit.
  AlgebraElement delta(int j) const;
  /// e_j, 1 <= j <= M.
  ModuleVector basis(int j) const;
  /// e_k delta^k = F(e_k), 1 <= k <= M.
  ModuleVector witness(int k) const;
  int limit_block() const noexcept { return trunc; }
  /// The standard basis of A^M as a Parseval frame.
  Frame standard_frame() const;
};

/// Throws Error unless 1 <= M <= N. Verifies F(v) = v and ||F|| <= 1.
TruncatedCSetting build_setting(int trunc, int dim);

/// Smallest ||a|| with ||y - v a|| <= eps over a commutative algebra, solved
/// exactly point by point: with a* = <v,y>/<v,v> and d the residual at a*, the
/// feasible a(n) form the disc |a - a*| <= sqrt(eps^2 - d^2)/|v(n)|. nullopt
/// when some point has d > eps. Throws ShapeMismatch for non-commutative
/// shapes.
std::optional<double> min_norm_coefficient(const ModuleVector& v, const ModuleVector& y, double eps);

struct GrowthRow {
  int k;
  /// Infimum of ||a|| over a with ||e_k delta^k - v a|| < eps; (1 - eps) k!.
  double required_norm;
  double factorial;
};

/// One row per witness e_k delta^k, k = 1..M.
std::vector<GrowthRow> coeff_growth(const TruncatedCSetting& setting, double eps);

/// ||x - sum_{j<=n} e_j <e_j, x>|| at x = e_{n+1} delta^{n+1}, computed through
/// the standard frame. Equals 1. Throws IndexOutOfRange unless 0 <= n < M.
double tail_obstruction(const TruncatedCSetting& setting, int n);

/// The same tail supremum over random ball images F(x) only, without the
/// deterministic witnesses.
double bulk_tail(const TruncatedCSetting& setting, int n, const BallSampler& sampler);

struct SingleGeneratorFit {
  /// a = sum_{k<=K} delta^k y_k k!.
  AlgebraElement coefficient;
  int prefix;
  /// ||y - v a||.
  double residual;
  /// ||y - F(y)||: the part of y outside the range of F, which no multiple of
  /// v can reach.
  double floor;
  bool in_range;
  bool within_eps;
};

/// Single-generator approximation of y by v a. K is the smallest prefix whose
/// tail ||sum_{k>K} e_k y_k|| is < eps, unless `prefix` fixes it.
SingleGeneratorFit single_generator_approx(const TruncatedCSetting& setting, const ModuleVector& y, double eps,
                                           std::optional<int> prefix = std::nullopt);

}  // namespace cstar
