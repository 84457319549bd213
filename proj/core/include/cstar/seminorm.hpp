#pragma once

// The seminorms nu_{X,Phi}(x)^2 = sup_k sum_{i>=k} |phi_k(<x, x_i>)|^2 built
// from an admissible system X and a sequence of states Phi, their
// pseudometrics, and the finite total-boundedness machinery around them.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cstar/module.hpp"

namespace cstar {

/// A finite set of points of a common module A^dim.
struct SampleSet {
  AlgebraShape shape;
  int dim;
  std::vector<ModuleVector> points;
  std::string label;

  /// Infers shape and dimension; throws DimensionMismatch on an empty list.
  static SampleSet of(std::vector<ModuleVector> points, std::string label = {});
  static SampleSet empty(AlgebraShape shape, int dim, std::string label = {});

  std::size_t size() const noexcept { return points.size(); }
  bool is_empty() const noexcept { return points.empty(); }
  /// Throws unless every point lives in A^dim over `shape`.
  void validate() const;
};

/// The pair (X, Phi): state phi_k is paired with the tail i >= k of X.
struct SeminormSpec {
  std::vector<ModuleVector> system;
  std::vector<State> states;
};

struct AdmissibilityReport {
  bool admissible = true;
  /// Index of a system vector with ||x_i|| > 1 + tol.
  std::optional<std::size_t> violating_vector;
  /// Index of a probe x with <x,x> - sum <x,x_i><x_i,x> not positive.
  std::optional<std::size_t> violating_probe;
  /// Smallest eigenvalue of the defect operator Id - sum theta_{x_i,x_i}
  /// (compressed to the submodule when one is given).
  double min_defect_eigenvalue = 0.0;
  std::string reason;

  explicit operator bool() const noexcept { return admissible; }
};

/// Admissibility of X on a submodule (the whole module when `submodule` is
/// null): ||x_i|| <= 1 + tol, the Gram defect is positive as an operator, and
/// the scalar inequality holds on every probe.
AdmissibilityReport admissible_check(std::span<const ModuleVector> system, const SampleSet& probes,
                                     double tol = 1e-9, const SubmodulePresentation* submodule = nullptr);

/// nu_{X,Phi}(x). Throws DimensionMismatch when |X| != |Phi|.
double seminorm(const SeminormSpec& spec, const ModuleVector& x);
/// d_{X,Phi}(x, y) = nu_{X,Phi}(x - y).
double pseudometric(const SeminormSpec& spec, const ModuleVector& x, const ModuleVector& y);

/// Greedy farthest-point eps-net, seeded at the first point: returns indices
/// into Y such that every point is at pseudometric distance < eps from one of
/// them. Ties go to the lowest index.
std::vector<std::size_t> epsilon_net(const SampleSet& y, const SeminormSpec& spec, double eps);

struct NetTransfer {
  /// Indices into S of the transferred net.
  std::vector<std::size_t> net;
  /// Indices into S_eps of the eps-net that was transferred.
  std::vector<std::size_t> approximating_net;
  /// max over s in S of the distance to the nearest net point.
  double cover_radius = 0.0;
  /// cover_radius < 6 eps.
  bool covers = false;
};

/// Turns an eps-net of an eps-close set S_eps into a 6eps-net of S: keep the
/// net points of S_eps that have a point of S within 3eps and return those
/// points of S. Throws ApproximationHypothesisViolated when some s is not
/// within eps of S_eps in module norm.
NetTransfer net_transfer(const SampleSet& s, const SampleSet& s_eps, const SeminormSpec& spec, double eps);

struct AdversarialWitness {
  SeminormSpec spec;
  /// The coordinate windows [schedule[i], schedule[i+1]).
  std::vector<int> schedule;
  /// Index into T of the point t_i chosen for window i.
  std::vector<std::size_t> witness_points;
  /// ||q_i t_i|| for the window projection q_i.
  std::vector<double> window_norms;
  /// |phi_i(<mu_i, q_i t_i>)|.
  std::vector<double> attained;
  /// attained_i - delta/8: lower bound of d(t_i, y) valid for every y with
  /// ||(1 - Q_{schedule[i]}) y|| < delta/8.
  std::vector<double> guaranteed_separation;
  /// Smallest d(t_i, y) over the points y of T with that small tail
  /// (+infinity when there are none).
  std::vector<double> observed_separation;
  AdmissibilityReport admissibility;
  double delta = 0.0;
  /// Every guaranteed and observed separation is >= delta/4 - 1e-6.
  bool separated = false;
};

/// Builds X = {mu_i}, mu_i = q_i t_i / ||q_i t_i||, and norming states phi_i
/// along a schedule of increasing coordinate indices, then measures how far
/// each t_i sits from the small-tail points. Throws UniformTailDecay when some
/// window has no t with ||q_i t|| > 3 delta / 4.
AdversarialWitness adversarial_witness(const SampleSet& t, std::span<const int> schedule, double delta);

}  // namespace cstar
