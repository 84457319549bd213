#include "cstar/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cstar {
namespace {

std::size_t idx(int k) { return static_cast<std::size_t>(k); }

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

AlgebraElement TruncatedCSetting::delta(int j) const {
  if (j < 1 || j > trunc) throw IndexOutOfRange("delta^" + std::to_string(j) + " outside 1.." + std::to_string(trunc));
  return AlgebraElement::block_unit(shape, j - 1);
}

ModuleVector TruncatedCSetting::basis(int j) const {
  if (j < 1 || j > dim) throw IndexOutOfRange("e_" + std::to_string(j) + " outside 1.." + std::to_string(dim));
  return ModuleVector::basis(shape, dim, j - 1);
}

ModuleVector TruncatedCSetting::witness(int k) const { return basis(k) * delta(k); }

Frame TruncatedCSetting::standard_frame() const {
  std::vector<ModuleVector> e;
  for (int j = 1; j <= dim; ++j) e.push_back(basis(j));
  return Frame::build(std::move(e));
}

namespace {

int checked_dim(int trunc, int dim) {
  if (dim < 1) throw Error("counterexample: module dimension must be at least 1");
  if (dim > trunc)
    throw Error("counterexample: module dimension " + std::to_string(dim) + " exceeds truncation " +
                std::to_string(trunc));
  return dim;
}

}  // namespace

TruncatedCSetting::TruncatedCSetting(int trunc_, int dim_)
    : trunc(trunc_),
      dim(checked_dim(trunc_, dim_)),
      shape(AlgebraShape::commutative(trunc_ + 1)),
      f(ModuleOperator::zero(shape, dim, dim)),
      v(ModuleVector::zero(shape, dim)) {
  std::vector<AlgebraElement> entries(idx(dim * dim), AlgebraElement::zero(shape));
  for (int k = 1; k <= dim; ++k) entries[idx((k - 1) * dim + (k - 1))] = delta(k);
  f = ModuleOperator(shape, dim, dim, std::move(entries));
  for (int j = 1; j <= dim; ++j) v += witness(j) * Complex(1.0 / factorial(j));
}

TruncatedCSetting build_setting(int trunc, int dim) {
  TruncatedCSetting s(trunc, dim);
  if (norm(s.f(s.v) - s.v) > 1e-12) throw Error("counterexample: F(v) != v");
  if (norm(s.f) > 1.0 + 1e-12) throw Error("counterexample: ||F|| > 1");
  return s;
}

std::optional<double> min_norm_coefficient(const ModuleVector& v, const ModuleVector& y, double eps) {
  require_compatible(v, y, "min_norm_coefficient");
  if (!v.shape().is_commutative()) throw ShapeMismatch("min_norm_coefficient needs a commutative algebra");
  double required = 0.0;
  for (int n = 0; n < v.shape().num_blocks(); ++n) {
    const Matrix& vn = v.block(n);
    const Matrix& yn = y.block(n);
    const double vv = vn.squaredNorm();
    if (vv == 0.0) {
      if (yn.norm() > eps) return std::nullopt;
      continue;
    }
    const Complex a_star = (vn.adjoint() * yn)(0, 0) / vv;
    const double d = (yn - vn * a_star).norm();
    if (d > eps) return std::nullopt;
    const double radius = std::sqrt(eps * eps - d * d) / std::sqrt(vv);
    required = std::max(required, std::max(0.0, std::abs(a_star) - radius));
  }
  return required;
}

std::vector<GrowthRow> coeff_growth(const TruncatedCSetting& setting, double eps) {
  if (!(eps > 0.0)) throw Error("coeff_growth: eps must be positive");
  std::vector<GrowthRow> rows;
  for (int k = 1; k <= setting.dim; ++k) {
    const auto required = min_norm_coefficient(setting.v, setting.witness(k), eps);
    // The witness lies in Span(v), so the problem is always feasible.
    rows.push_back({k, required.value_or(std::numeric_limits<double>::infinity()), factorial(k)});
  }
  return rows;
}

double tail_obstruction(const TruncatedCSetting& setting, int n) {
  if (n < 0 || n >= setting.dim)
    throw IndexOutOfRange("tail_obstruction: n = " + std::to_string(n) + " needs 0 <= n < " +
                          std::to_string(setting.dim));
  return setting.standard_frame().reconstruction_tail(setting.witness(n + 1), static_cast<std::size_t>(n));
}

double bulk_tail(const TruncatedCSetting& setting, int n, const BallSampler& sampler) {
  if (n < 0 || n > setting.dim) throw IndexOutOfRange("bulk_tail: n outside 0.." + std::to_string(setting.dim));
  BallSampler bulk = sampler;
  bulk.include_witnesses = false;
  const Frame frame = setting.standard_frame();
  double sup = 0.0;
  for (const auto& x : bulk.draw(setting.shape, setting.dim))
    sup = std::max(sup, frame.reconstruction_tail(setting.f(x), static_cast<std::size_t>(n)));
  return sup;
}

SingleGeneratorFit single_generator_approx(const TruncatedCSetting& setting, const ModuleVector& y, double eps,
                                           std::optional<int> prefix) {
  if (!(eps > 0.0)) throw Error("single_generator_approx: eps must be positive");
  require_compatible(setting.v, y, "single_generator_approx");
  const int m = setting.dim;

  int k_max = m;
  if (prefix) {
    if (*prefix < 0 || *prefix > m) throw IndexOutOfRange("single_generator_approx: prefix outside 0.." + std::to_string(m));
    k_max = *prefix;
  } else {
    for (int k = 0; k <= m; ++k) {
      const double tail = norm(y - coordinate_projection(setting.shape, m, 0, k)(y));
      if (tail < eps) {
        k_max = k;
        break;
      }
    }
  }

  AlgebraElement a = AlgebraElement::zero(setting.shape);
  for (int k = 1; k <= k_max; ++k) a += setting.delta(k) * y.coord(k - 1) * Complex(factorial(k));

  SingleGeneratorFit fit{a, k_max, norm(y - setting.v * a), norm(y - setting.f(y)), false, false};
  fit.in_range = fit.floor <= 1e-12 * std::max(1.0, norm(y));
  fit.within_eps = fit.residual < eps;
  return fit;
}

}  // namespace cstar
