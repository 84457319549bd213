#include "cstar/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cstar {

SampleSet SampleSet::of(std::vector<ModuleVector> points, std::string label) {
  if (points.empty()) throw DimensionMismatch("SampleSet::of needs at least one point");
  AlgebraShape shape = points.front().shape();
  const int dim = points.front().dim();
  SampleSet s{std::move(shape), dim, std::move(points), std::move(label)};
  s.validate();
  return s;
}

SampleSet SampleSet::empty(AlgebraShape shape, int dim, std::string label) {
  return SampleSet{std::move(shape), dim, {}, std::move(label)};
}

void SampleSet::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_same_shape(shape, points[i].shape(), "sample point");
    if (points[i].dim() != dim)
      throw DimensionMismatch("sample point " + std::to_string(i) + " lives in A^" + std::to_string(points[i].dim()) +
                              ", expected A^" + std::to_string(dim));
  }
}

AdmissibilityReport admissible_check(std::span<const ModuleVector> system, const SampleSet& probes, double tol,
                                     const SubmodulePresentation* submodule) {
  AdmissibilityReport report;
  if (system.empty()) {
    report.min_defect_eigenvalue = 1.0;
    return report;
  }
  const AlgebraShape& shape = system.front().shape();
  const int dim = system.front().dim();
  for (std::size_t i = 0; i < system.size(); ++i) {
    require_compatible(system.front(), system[i], "admissible system");
    if (norm(system[i]) > 1.0 + tol) {
      report.admissible = false;
      report.violating_vector = i;
      report.reason = "||x_" + std::to_string(i) + "|| = " + std::to_string(norm(system[i])) + " exceeds 1";
      break;
    }
  }

  ModuleOperator defect = ModuleOperator::identity(shape, dim);
  for (const auto& x : system) defect -= theta(x, x);
  if (submodule != nullptr) defect = submodule->projection() * defect * submodule->projection();
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& b : defect.blocks()) {
    const Matrix h = (b + b.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    lowest = std::min(lowest, es.eigenvalues().minCoeff());
  }
  report.min_defect_eigenvalue = lowest;
  if (report.admissible && lowest < -tol) {
    report.admissible = false;
    report.reason = "Gram defect has eigenvalue " + std::to_string(lowest);
  }

  for (std::size_t p = 0; p < probes.points.size() && report.admissible; ++p) {
    ModuleVector x = probes.points[p];
    if (submodule != nullptr) x = submodule->project(x);
    AlgebraElement d = inner(x, x);
    for (const auto& xi : system) {
      const AlgebraElement c = inner(xi, x);
      d -= c.adjoint() * c;
    }
    const double scale = std::max(norm(inner(x, x)), 1.0);
    if (!is_self_adjoint(d, tol) || min_eigenvalue(d) < -tol * scale) {
      report.admissible = false;
      report.violating_probe = p;
      report.reason = "probe " + std::to_string(p) + " violates the Gram inequality";
    }
  }
  return report;
}

double seminorm(const SeminormSpec& spec, const ModuleVector& x) {
  const std::size_t count = spec.system.size();
  if (spec.states.size() != count)
    throw DimensionMismatch("seminorm spec has " + std::to_string(count) + " system vectors and " +
                            std::to_string(spec.states.size()) + " states");
  std::vector<AlgebraElement> pairings;
  pairings.reserve(count);
  for (const auto& xi : spec.system) pairings.push_back(inner(x, xi));
  double best = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    double sum = 0.0;
    for (std::size_t i = k; i < count; ++i) sum += std::norm(spec.states[k](pairings[i]));
    best = std::max(best, sum);
  }
  return std::sqrt(best);
}

double pseudometric(const SeminormSpec& spec, const ModuleVector& x, const ModuleVector& y) {
  return seminorm(spec, x - y);
}

std::vector<std::size_t> epsilon_net(const SampleSet& y, const SeminormSpec& spec, double eps) {
  if (!(eps > 0.0)) throw Error("epsilon_net: eps must be positive");
  std::vector<std::size_t> net;
  if (y.points.empty()) return net;
  const std::size_t count = y.points.size();
  std::vector<double> nearest(count, std::numeric_limits<double>::infinity());
  std::size_t next = 0;
  while (true) {
    net.push_back(next);
    for (std::size_t i = 0; i < count; ++i)
      nearest[i] = std::min(nearest[i], pseudometric(spec, y.points[i], y.points[next]));
    std::size_t far = 0;
    for (std::size_t i = 1; i < count; ++i)
      if (nearest[i] > nearest[far]) far = i;
    if (nearest[far] < eps) break;
    next = far;
  }
  return net;
}

NetTransfer net_transfer(const SampleSet& s, const SampleSet& s_eps, const SeminormSpec& spec, double eps) {
  if (!(eps > 0.0)) throw Error("net_transfer: eps must be positive");
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& y : s_eps.points) d = std::min(d, norm(s.points[i] - y));
    if (!(d < eps)) throw ApproximationHypothesisViolated(i, d);
  }

  NetTransfer out;
  out.approximating_net = epsilon_net(s_eps, spec, eps);
  for (std::size_t j : out.approximating_net) {
    std::optional<std::size_t> pick;
    double best = 3.0 * eps;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const double d = pseudometric(spec, s.points[i], s_eps.points[j]);
      if (d < best) {
        best = d;
        pick = i;
      }
    }
    if (pick && std::find(out.net.begin(), out.net.end(), *pick) == out.net.end()) out.net.push_back(*pick);
  }

  for (const auto& x : s.points) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t j : out.net) d = std::min(d, pseudometric(spec, x, s.points[j]));
    out.cover_radius = std::max(out.cover_radius, d);
  }
  out.covers = out.cover_radius < 6.0 * eps;
  return out;
}

AdversarialWitness adversarial_witness(const SampleSet& t, std::span<const int> schedule, double delta) {
  if (!(delta > 0.0)) throw Error("adversarial_witness: delta must be positive");
  if (schedule.size() < 2) throw Error("adversarial_witness: schedule needs at least two indices");
  for (std::size_t i = 0; i + 1 < schedule.size(); ++i)
    if (schedule[i] >= schedule[i + 1]) throw Error("adversarial_witness: schedule must be increasing");
  if (schedule.front() < 0 || schedule.back() > t.dim)
    throw IndexOutOfRange("adversarial_witness: schedule outside A^" + std::to_string(t.dim));

  AdversarialWitness w;
  w.delta = delta;
  w.schedule.assign(schedule.begin(), schedule.end());
  const std::size_t windows = schedule.size() - 1;

  for (std::size_t i = 0; i < windows; ++i) {
    const ModuleOperator q = coordinate_projection(t.shape, t.dim, schedule[i], schedule[i + 1]);
    std::size_t pick = 0;
    double best = -1.0;
    for (std::size_t p = 0; p < t.points.size(); ++p) {
      const double v = norm(q(t.points[p]));
      if (v > best) {
        best = v;
        pick = p;
      }
    }
    if (!(best > 0.75 * delta)) throw UniformTailDecay(i, std::max(best, 0.0));
    const ModuleVector window_part = q(t.points[pick]);
    ModuleVector mu = window_part * Complex(1.0 / best);
    const AlgebraElement a = inner(mu, window_part);
    State phi = norming_state(a);
    w.attained.push_back(std::abs(phi(a)));
    w.guaranteed_separation.push_back(w.attained.back() - delta / 8.0);
    w.witness_points.push_back(pick);
    w.window_norms.push_back(best);
    w.spec.system.push_back(std::move(mu));
    w.spec.states.push_back(std::move(phi));
  }

  w.admissibility = admissible_check(w.spec.system, t);

  w.separated = w.admissibility.admissible;
  const double threshold = delta / 4.0 - 1e-6;
  for (std::size_t i = 0; i < windows; ++i) {
    const ModuleOperator tail = coordinate_projection(t.shape, t.dim, schedule[i], t.dim);
    double observed = std::numeric_limits<double>::infinity();
    for (const auto& y : t.points) {
      if (norm(tail(y)) < delta / 8.0)
        observed = std::min(observed, pseudometric(w.spec, t.points[w.witness_points[i]], y));
    }
    w.observed_separation.push_back(observed);
    if (w.guaranteed_separation[i] < threshold || observed < threshold) w.separated = false;
  }
  return w;
}

}  // namespace cstar
