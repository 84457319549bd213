#pragma once

// Certificates for A-precompactness of finite samples: bounded-coefficient
// approximation by finitely many generators (a), uniform frame reconstruction
// tails (b), uniform approximation of the identity by a finite-rank operator
// (c, d), their mutual consistency, compactness of operators via the image of
// the unit ball, the theta-series of an operator, and the free-submodule
// criterion.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cstar/frame.hpp"
#include "cstar/sampling.hpp"
#include "cstar/seminorm.hpp"

namespace cstar {

enum class Condition { A, B, CD, Free };
enum class Verdict { Pass, Fail, Inconclusive };

const char* to_string(Condition c) noexcept;
const char* to_string(Verdict v) noexcept;

/// theta_{x,y}: z -> x <y, z>. The functional form theta_{x,f} uses y as the
/// representing vector of f.
struct ThetaTerm {
  ModuleVector x;
  ModuleVector y;
};

ModuleOperator assemble(const std::vector<ThetaTerm>& terms, const AlgebraShape& shape, int dim);

struct Certificate {
  Condition condition = Condition::A;
  double eps = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  /// Generators z_1..z_s (condition a, free submodule).
  std::vector<ModuleVector> generators;
  /// Condition b: smallest N with sup tail < eps for every prefix n >= N.
  /// Condition c/d: rank of the accepted operator.
  std::optional<std::size_t> tail_index;
  /// Condition a: the observed M_eps.
  std::optional<double> coefficient_bound;
  /// Per point: the approximation error at the accepted (or last tried) stage.
  std::vector<double> residuals;
  /// Condition a: per point max_k ||a_k(x)||.
  std::vector<double> coefficient_norms;
  /// Free submodule: per point distance to the span.
  std::vector<double> distances;
  /// Sup error per prefix length n = 0, 1, ... (b and c/d).
  std::vector<double> profile;
  /// Condition c/d: the finite-rank operator as theta-terms.
  std::vector<ThetaTerm> approximant;
  /// A point whose error stays >= eps (fail) or the worst point.
  std::optional<std::size_t> witness_point;
  double sup_error = 0.0;
  std::string note;
};

struct ConditionAOptions {
  /// When set, an M_eps above the limit turns a residual pass into
  /// Inconclusive: least-squares coefficients are not minimal-norm among all
  /// eps-approximate coefficients.
  std::optional<double> coefficient_limit;
  double tol = kDefaultTolerance;
};

/// Least-squares coefficients onto Span_A(gens) for every point. Pass iff every
/// residual is < eps; M_eps is the largest coefficient norm seen. An empty
/// sample passes vacuously. Throws on eps <= 0 or empty gens.
Certificate check_condition_a(const SampleSet& z, const std::vector<ModuleVector>& gens, double eps,
                              const ConditionAOptions& options = {});

/// Prefix scan of the reconstruction tails in the frame's stored order.
/// Pass iff the smallest N with profile[m] < eps for all m >= N is at most
/// `prefix_budget` (default: frame length). Fail when one point keeps tail
/// >= eps at every n <= budget, Inconclusive otherwise.
Certificate check_condition_b(const SampleSet& z, const Frame& frame, double eps,
                              std::optional<std::size_t> prefix_budget = std::nullopt);

/// The default frame of a sample: the coordinate Parseval frame of the
/// submodule generated by the sample. nullopt when every point is zero.
std::optional<Frame> sample_frame(const SampleSet& z, double tol = kDefaultTolerance);

/// Searches T_r = sum_{j<r} theta_{x_j, g_j} over r = 0..rank_budget for a
/// frame of the sample's submodule (default: sample_frame) and accepts the
/// first r with sup error < eps. On exhaustion: Fail with a uniform witness
/// point, Inconclusive otherwise.
Certificate check_condition_cd(const SampleSet& z, double eps, std::size_t rank_budget,
                               const std::optional<Frame>& frame = std::nullopt);

struct EquivalenceConfig {
  double eps = 0.25;
  /// Frame for the sample's submodule (default: sample_frame).
  std::optional<Frame> frame;
  /// Generators for condition a (default: the frame vectors).
  std::optional<std::vector<ModuleVector>> generators;
  /// Prefix and rank budget for b and c/d (default: frame length).
  std::optional<std::size_t> budget;
  double tol = 1e-9;
};

struct EquivalenceReport {
  double eps = 0.0;
  /// eps * c1 / (3 c2): the accuracy at which condition a is checked.
  double eps_a = 0.0;
  double c1 = 1.0;
  double c2 = 1.0;
  Certificate a;
  Certificate b;
  Certificate cd;
  /// Failed consistency checks between the conditions. Nonempty means an
  /// implementation error: the conditions are equivalent.
  std::vector<std::string> violations;
  /// Pass when a, b and c/d pass; Fail when b or c/d fails; else Inconclusive.
  Verdict verdict = Verdict::Inconclusive;
};

/// Runs a (at eps c1/(3c2)), b and c/d (at eps) and cross-checks them:
/// the three-term a => b estimate at every n past the generators' tail
/// index, b => c at rank N, and d => a with coefficients <g_j, x> bounded by
/// R ||g_j||.
EquivalenceReport certify_equivalences(const SampleSet& z, const EquivalenceConfig& config);

struct OperatorOptions {
  /// Rank budget (default: frame length).
  std::optional<std::size_t> budget;
  /// Frame of the operator's range (default: coordinate Parseval frame of the
  /// range projection).
  std::optional<Frame> frame;
  double tol = kDefaultTolerance;
};

struct OperatorReport {
  /// Condition c/d for F itself: profile[r] = ||F - P_r F|| exactly, the
  /// approximant is sum_{j<r} theta_{x_j, F* g_j}.
  Certificate certificate;
  /// certify_equivalences on the sampled image F(B).
  EquivalenceReport image;
  std::size_t samples = 0;
  /// Sampler points dropped for lying outside the unit ball.
  std::size_t rejected = 0;
};

OperatorReport operator_precompact(const ModuleOperator& f, const BallSampler& sampler, double eps,
                                   const OperatorOptions& options = {});

struct SeriesDecomposition {
  /// theta_{x_j, T* g_j} in frame order.
  std::vector<ThetaTerm> terms;
  /// ||T - S_n|| for n = 0..terms.size().
  std::vector<double> residual_norms;
  /// Smallest n with ||T - S_n|| < eps.
  std::optional<std::size_t> n_eps;
  /// ||T - S_L|| for the full frame: zero iff the frame covers Ran(T).
  double floor = 0.0;
  bool covers_range = false;
};

/// T = sum_j theta_{x_j, T* g_j} for a frame of Ran(T) (default: coordinate
/// Parseval frame of the range projection). A frame that misses part of the
/// range is reported through `floor`, not rejected.
SeriesDecomposition series_decompose(const ModuleOperator& t, const std::optional<Frame>& frame, double eps,
                                     double tol = kDefaultTolerance);

/// largest ||<e_i, e_j> - delta_ij 1|| over the family.
double orthonormality_defect(const std::vector<ModuleVector>& gens);

/// Requires <e_i, e_j> = delta_ij within tol (NotOrthonormal otherwise).
/// Pass iff dist(x, L_s) < eps for every x; then ||x - P x|| < 2 eps is
/// checked for P = sum_j theta_{e_j, e_j}.
Certificate free_submodule_check(const SampleSet& z, const std::vector<ModuleVector>& gens, double eps,
                                 double tol = 1e-9);

}  // namespace cstar
