#include "cstar/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cstar/parallel.hpp"

namespace cstar {
namespace {

constexpr std::size_t kMaxViolationMessages = 8;

void require_eps(double eps, const char* where) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(std::string(where) + ": eps must be positive");
}

void require_sample_in(const SampleSet& z, const AlgebraShape& shape, int dim, const char* where) {
  z.validate();
  require_same_shape(z.shape, shape, where);
  if (z.dim != dim)
    throw DimensionMismatch(std::string(where) + ": sample lives in A^" + std::to_string(z.dim) + ", expected A^" +
                            std::to_string(dim));
}

/// tails[i][n] = ||x_i - sum_{j<n} x_j <g_j, x_i>||.
std::vector<std::vector<double>> tail_table(const SampleSet& z, const Frame& frame) {
  std::vector<std::vector<double>> tails(z.size());
  parallel_for(z.size(), [&](std::size_t i) { tails[i] = frame.tail_profile(z.points[i]); });
  return tails;
}

std::vector<double> column_max(const std::vector<std::vector<double>>& table, std::size_t length) {
  std::vector<double> out(length, 0.0);
  for (const auto& row : table)
    for (std::size_t n = 0; n < length; ++n) out[n] = std::max(out[n], row[n]);
  return out;
}

std::vector<double> column(const std::vector<std::vector<double>>& table, std::size_t n) {
  std::vector<double> out;
  out.reserve(table.size());
  for (const auto& row : table) out.push_back(row[n]);
  return out;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

/// A point whose value stays >= eps at every index in [0, last].
std::optional<std::size_t> uniform_witness(const std::vector<std::vector<double>>& table, std::size_t last,
                                           double eps) {
  std::optional<std::size_t> best;
  double best_floor = -1.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    double floor = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n <= last; ++n) floor = std::min(floor, table[i][n]);
    if (floor >= eps && floor > best_floor) {
      best_floor = floor;
      best = i;
    }
  }
  return best;
}

Certificate vacuous(Condition condition, double eps) {
  Certificate c;
  c.condition = condition;
  c.eps = eps;
  c.verdict = Verdict::Pass;
  c.profile = {0.0};
  if (condition == Condition::A) c.coefficient_bound = 0.0;
  if (condition == Condition::B || condition == Condition::CD) c.tail_index = 0;
  c.note = "vacuous: nothing to approximate";
  return c;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct ViolationLog {
  std::vector<std::string>& out;
  std::size_t dropped = 0;

  void add(std::string message) {
    if (out.size() < kMaxViolationMessages)
      out.push_back(std::move(message));
    else
      ++dropped;
  }
  void flush() {
    if (dropped > 0) out.push_back(std::to_string(dropped) + " further violations not listed");
    dropped = 0;
  }
};

void check_a_implies_b(const SampleSet& z, const Frame& frame, const std::vector<ModuleVector>& gens,
                       const EquivalenceReport& r, double tol, ViolationLog& log) {
  const double m = *r.a.coefficient_bound;
  const std::size_t s = gens.size();
  const std::size_t length = frame.size();

  std::vector<std::vector<double>> gen_tails(s);
  for (std::size_t k = 0; k < s; ++k) gen_tails[k] = frame.tail_profile(gens[k]);
  const double threshold = m > 0.0 ? r.eps / (3.0 * static_cast<double>(s) * m) : std::numeric_limits<double>::infinity();

  std::optional<std::size_t> n_gens;
  for (std::size_t n = length + 1; n-- > 0;) {
    bool small = true;
    for (const auto& row : gen_tails) small = small && row[n] <= threshold;
    if (!small) break;
    n_gens = n;
  }
  if (!n_gens) return;  // the generators are not reconstructed by this frame

  const SpanSolver solver(gens, tol);
  const double ratio = r.c2 / r.c1;
  std::vector<std::string> local(z.size());
  parallel_for(z.size(), [&](std::size_t i) {
    const ModuleVector& x = z.points[i];
    const SpanSolver::Fit fit = solver.fit(x);
    const ModuleVector rest = x - fit.approximant;
    const double t1 = norm(rest);
    std::vector<double> coeff_norms;
    for (const auto& a : fit.coefficients) coeff_norms.push_back(norm(a));
    const double scale = std::max(1.0, norm(x));
    for (std::size_t n = *n_gens; n <= length; ++n) {
      double t2 = 0.0;
      for (std::size_t k = 0; k < s; ++k) t2 += gen_tails[k][n] * coeff_norms[k];
      const double t3 = norm(frame.reconstruct(rest, n));
      const double tail = frame.reconstruction_tail(x, n);
      std::string problem;
      if (tail > t1 + t2 + t3 + tol * scale)
        problem = "triangle estimate";
      else if (t3 > ratio * t1 + tol * scale)
        problem = "partial-sum bound c2/c1";
      else if (t1 + t2 + t3 >= r.eps + tol * scale)
        problem = "three-term total reaches eps";
      if (!problem.empty()) {
        local[i] = "a => b: " + problem + " fails at point " + std::to_string(i) + ", n = " + std::to_string(n) +
                   " (tail " + fmt(tail) + ", terms " + fmt(t1) + " + " + fmt(t2) + " + " + fmt(t3) + ")";
        return;
      }
    }
  });
  for (auto& msg : local)
    if (!msg.empty()) log.add(std::move(msg));

  // The estimate makes every prefix n >= N_gens uniformly eps-good, so b's N
  // (smallest index from which all tails are < eps) cannot exceed N_gens.
  if (!r.b.tail_index)
    log.add("a => b: tails stay >= eps up to the full frame although N_gens = " + std::to_string(*n_gens));
  else if (*r.b.tail_index > *n_gens)
    log.add("a => b: b needs N = " + std::to_string(*r.b.tail_index) + " > N_gens = " + std::to_string(*n_gens));
}

}  // namespace

const char* to_string(Condition c) noexcept {
  switch (c) {
    case Condition::A: return "a";
    case Condition::B: return "b";
    case Condition::CD: return "cd";
    case Condition::Free: return "free";
  }
  return "?";
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

ModuleOperator assemble(const std::vector<ThetaTerm>& terms, const AlgebraShape& shape, int dim) {
  ModuleOperator t = ModuleOperator::zero(shape, dim, dim);
  for (const auto& term : terms) t += theta(term.x, term.y);
  return t;
}

Certificate check_condition_a(const SampleSet& z, const std::vector<ModuleVector>& gens, double eps,
                              const ConditionAOptions& options) {
  require_eps(eps, "check_condition_a");
  if (gens.empty()) throw Error("check_condition_a: needs at least one generator");
  require_sample_in(z, gens.front().shape(), gens.front().dim(), "check_condition_a");

  Certificate c;
  c.condition = Condition::A;
  c.eps = eps;
  c.generators = gens;
  if (z.is_empty()) {
    Certificate v = vacuous(Condition::A, eps);
    v.generators = gens;
    return v;
  }

  const SpanSolver solver(gens, options.tol);
  c.residuals.assign(z.size(), 0.0);
  c.coefficient_norms.assign(z.size(), 0.0);
  parallel_for(z.size(), [&](std::size_t i) {
    const SpanSolver::Fit fit = solver.fit(z.points[i]);
    c.residuals[i] = fit.residual;
    c.coefficient_norms[i] = fit.coefficient_norm;
  });

  const std::size_t worst = argmax(c.residuals);
  c.sup_error = c.residuals[worst];
  c.coefficient_bound = *std::max_element(c.coefficient_norms.begin(), c.coefficient_norms.end());
  if (c.sup_error < eps) {
    c.verdict = Verdict::Pass;
    if (options.coefficient_limit && *c.coefficient_bound > *options.coefficient_limit) {
      c.verdict = Verdict::Inconclusive;
      c.witness_point = argmax(c.coefficient_norms);
      c.note = "coefficient norm " + fmt(*c.coefficient_bound) + " exceeds the limit " +
               fmt(*options.coefficient_limit);
    }
  } else {
    c.verdict = Verdict::Fail;
    c.witness_point = worst;
    c.note = "distance to the generated submodule reaches eps";
  }
  return c;
}

Certificate check_condition_b(const SampleSet& z, const Frame& frame, double eps,
                              std::optional<std::size_t> prefix_budget) {
  require_eps(eps, "check_condition_b");
  require_sample_in(z, frame.shape(), frame.dim(), "check_condition_b");
  const std::size_t length = frame.size();
  const std::size_t budget = std::min(prefix_budget.value_or(length), length);

  Certificate c;
  c.condition = Condition::B;
  c.eps = eps;
  if (z.is_empty()) return vacuous(Condition::B, eps);

  const auto tails = tail_table(z, frame);
  c.profile = column_max(tails, length + 1);

  std::optional<std::size_t> n_star;
  for (std::size_t n = length + 1; n-- > 0;) {
    if (!(c.profile[n] < eps)) break;
    n_star = n;
  }

  if (n_star && *n_star <= budget) {
    c.verdict = Verdict::Pass;
    c.tail_index = n_star;
    c.residuals = column(tails, *n_star);
    c.sup_error = c.profile[*n_star];
    c.witness_point = argmax(c.residuals);
    return c;
  }

  // Some prefix m >= budget has sup tail >= eps, so no N <= budget works.
  std::size_t m = budget;
  while (c.profile[m] < eps) ++m;
  c.verdict = Verdict::Fail;
  c.tail_index = n_star;
  c.residuals = column(tails, budget);
  c.sup_error = c.profile[m];
  c.witness_point = uniform_witness(tails, budget, eps);
  if (!c.witness_point) c.witness_point = argmax(column(tails, m));
  c.note = n_star ? "uniform tail needs N = " + std::to_string(*n_star) + " > budget " + std::to_string(budget)
                  : "tails do not fall below eps even for the full frame";
  return c;
}

std::optional<Frame> sample_frame(const SampleSet& z, double tol) {
  if (z.is_empty()) return std::nullopt;
  const ModuleOperator p = span_projection(z.shape, z.dim, z.points, tol);
  std::vector<ModuleVector> vectors = coordinate_parseval_frame(p, tol);
  if (vectors.empty()) return std::nullopt;
  return Frame::build(std::move(vectors), FrameScope::Span, tol);
}

Certificate check_condition_cd(const SampleSet& z, double eps, std::size_t rank_budget,
                               const std::optional<Frame>& frame) {
  require_eps(eps, "check_condition_cd");
  z.validate();
  if (z.is_empty()) return vacuous(Condition::CD, eps);

  const std::optional<Frame> own = frame ? std::nullopt : sample_frame(z);
  const Frame* f = frame ? &*frame : (own ? &*own : nullptr);
  if (f == nullptr) {
    Certificate v = vacuous(Condition::CD, eps);
    v.residuals.assign(z.size(), 0.0);
    v.note = "every sample point is zero";
    return v;
  }
  require_sample_in(z, f->shape(), f->dim(), "check_condition_cd");

  Certificate c;
  c.condition = Condition::CD;
  c.eps = eps;
  const std::size_t last = std::min(rank_budget, f->size());
  const auto tails = tail_table(z, *f);
  c.profile = column_max(tails, last + 1);

  for (std::size_t r = 0; r <= last; ++r) {
    if (c.profile[r] < eps) {
      c.verdict = Verdict::Pass;
      c.tail_index = r;
      c.residuals = column(tails, r);
      c.sup_error = c.profile[r];
      c.witness_point = argmax(c.residuals);
      for (std::size_t j = 0; j < r; ++j) c.approximant.push_back({f->vectors()[j], f->dual()[j]});
      return c;
    }
  }

  const std::size_t best =
      static_cast<std::size_t>(std::min_element(c.profile.begin(), c.profile.end()) - c.profile.begin());
  c.residuals = column(tails, best);
  c.sup_error = c.profile[best];
  c.witness_point = uniform_witness(tails, last, eps);
  if (c.witness_point) {
    c.verdict = Verdict::Fail;
    c.note = "point " + std::to_string(*c.witness_point) + " keeps error >= eps at every rank <= " +
             std::to_string(last);
  } else {
    c.verdict = Verdict::Inconclusive;
    c.witness_point = argmax(c.residuals);
    c.note = "rank budget " + std::to_string(last) + " exhausted";
  }
  return c;
}

EquivalenceReport certify_equivalences(const SampleSet& z, const EquivalenceConfig& config) {
  require_eps(config.eps, "certify_equivalences");
  z.validate();
  EquivalenceReport r;
  r.eps = config.eps;

  const std::optional<Frame> own = config.frame ? std::nullopt : sample_frame(z, kDefaultTolerance);
  const Frame* frame = config.frame ? &*config.frame : (own ? &*own : nullptr);
  if (frame == nullptr) {
    r.eps_a = config.eps / 3.0;
    r.a = vacuous(Condition::A, r.eps_a);
    r.b = vacuous(Condition::B, config.eps);
    r.cd = vacuous(Condition::CD, config.eps);
    r.verdict = Verdict::Pass;
    return r;
  }

  const FrameBounds bounds = frame->bounds();
  r.c1 = bounds.lower;
  r.c2 = bounds.upper;
  r.eps_a = config.eps * r.c1 / (3.0 * r.c2);
  const std::vector<ModuleVector>& gens = config.generators ? *config.generators : frame->vectors();
  const std::size_t budget = std::min(config.budget.value_or(frame->size()), frame->size());

  r.a = check_condition_a(z, gens, r.eps_a, {std::nullopt, config.tol});
  r.b = check_condition_b(z, *frame, config.eps, budget);
  r.cd = check_condition_cd(z, config.eps, budget, *frame);

  ViolationLog log{r.violations};
  if (!z.is_empty()) {
    if (r.a.verdict == Verdict::Pass) check_a_implies_b(z, *frame, gens, r, config.tol, log);

    // b => c: the partial sum at N is a finite-rank operator with error < eps.
    if (r.b.verdict == Verdict::Pass) {
      const std::size_t n = *r.b.tail_index;
      if (r.cd.verdict != Verdict::Pass || *r.cd.tail_index > n)
        log.add("b => c: b holds at N = " + std::to_string(n) + " but c/d does not pass at rank <= N");
    }

    // d => a: a_j(x) = <g_j, x> with ||a_j(x)|| <= ||g_j|| R.
    if (r.cd.verdict == Verdict::Pass && !r.cd.approximant.empty()) {
      double radius = 0.0;
      for (const auto& x : z.points) radius = std::max(radius, norm(x));
      std::vector<ModuleVector> prefix;
      for (const auto& term : r.cd.approximant) {
        prefix.push_back(term.x);
        const double bound = norm(term.y) * radius;
        for (std::size_t i = 0; i < z.size(); ++i) {
          const double a = norm(inner(term.y, z.points[i]));
          if (a > bound + config.tol * std::max(1.0, bound))
            log.add("d => a: coefficient " + fmt(a) + " exceeds ||f|| R = " + fmt(bound) + " at point " +
                    std::to_string(i));
        }
      }
      const Certificate again = check_condition_a(z, prefix, config.eps, {std::nullopt, config.tol});
      if (again.verdict != Verdict::Pass)
        log.add("d => a: generators of the c/d operator do not approximate within eps (sup " +
                fmt(again.sup_error) + ")");
    }
  }

  log.flush();

  if (r.a.verdict == Verdict::Pass && r.b.verdict == Verdict::Pass && r.cd.verdict == Verdict::Pass)
    r.verdict = Verdict::Pass;
  else if (r.b.verdict == Verdict::Fail || r.cd.verdict == Verdict::Fail)
    r.verdict = Verdict::Fail;
  else
    r.verdict = Verdict::Inconclusive;
  return r;
}

namespace {

std::optional<Frame> range_frame(const ModuleOperator& t, double tol) {
  std::vector<ModuleVector> vectors = coordinate_parseval_frame(range_projection(t, tol), tol);
  if (vectors.empty()) return std::nullopt;
  return Frame::build(std::move(vectors), FrameScope::Span, tol);
}

}  // namespace

OperatorReport operator_precompact(const ModuleOperator& f, const BallSampler& sampler, double eps,
                                   const OperatorOptions& options) {
  require_eps(eps, "operator_precompact");
  OperatorReport report;

  std::vector<ModuleVector> ball;
  for (auto& x : sampler.draw(f.shape(), f.source_dim())) {
    if (norm(x) <= 1.0 + 1e-12)
      ball.push_back(std::move(x));
    else
      ++report.rejected;
  }
  report.samples = ball.size();
  SampleSet image = SampleSet::empty(f.shape(), f.target_dim(), "image");
  image.points.resize(ball.size(), ModuleVector::zero(f.shape(), f.target_dim()));
  parallel_for(ball.size(), [&](std::size_t i) { image.points[i] = f(ball[i]); });

  const std::optional<Frame> own = options.frame ? std::nullopt : range_frame(f, options.tol);
  const Frame* frame = options.frame ? &*options.frame : (own ? &*own : nullptr);

  Certificate& c = report.certificate;
  c.condition = Condition::CD;
  c.eps = eps;
  if (frame == nullptr) {
    c = vacuous(Condition::CD, eps);
    c.residuals.assign(ball.size(), 0.0);
    c.note = "operator is zero";
    report.image = certify_equivalences(image, {eps, std::nullopt, std::nullopt, std::nullopt, 1e-9});
    return report;
  }
  if (frame->dim() != f.target_dim() || !(frame->shape() == f.shape()))
    throw DimensionMismatch("operator_precompact: frame does not live in the target module");

  const std::size_t length = frame->size();
  const std::size_t budget = std::min(options.budget.value_or(length), length);
  const ModuleOperator f_adj = f.adjoint();
  std::vector<ThetaTerm> terms;
  ModuleOperator partial = ModuleOperator::zero(f.shape(), f.target_dim(), f.source_dim());
  c.profile.push_back(norm(f));
  for (std::size_t j = 0; j < length; ++j) {
    terms.push_back({frame->vectors()[j], f_adj(frame->dual()[j])});
    partial += theta(terms.back().x, terms.back().y);
    c.profile.push_back(norm(f - partial));
  }

  std::optional<std::size_t> rank;
  for (std::size_t r = 0; r <= budget && !rank; ++r)
    if (c.profile[r] < eps) rank = r;
  const std::size_t used = rank.value_or(budget);

  c.residuals.assign(ball.size(), 0.0);
  parallel_for(ball.size(), [&](std::size_t i) { c.residuals[i] = frame->reconstruction_tail(image.points[i], used); });
  if (!c.residuals.empty()) c.witness_point = argmax(c.residuals);
  c.sup_error = c.profile[used];
  c.tail_index = rank;
  if (rank) {
    c.verdict = Verdict::Pass;
    c.approximant.assign(terms.begin(), terms.begin() + static_cast<std::ptrdiff_t>(*rank));
  } else {
    c.verdict = Verdict::Fail;
    c.note = "||F - P_r F|| >= eps for every rank r <= " + std::to_string(budget);
  }

  report.image = certify_equivalences(image, {eps, *frame, std::nullopt, budget, 1e-9});
  return report;
}

SeriesDecomposition series_decompose(const ModuleOperator& t, const std::optional<Frame>& frame, double eps,
                                     double tol) {
  require_eps(eps, "series_decompose");
  SeriesDecomposition out;
  const double t_norm = norm(t);
  const std::optional<Frame> own = frame ? std::nullopt : range_frame(t, tol);
  const Frame* f = frame ? &*frame : (own ? &*own : nullptr);
  out.residual_norms.push_back(t_norm);
  if (f != nullptr) {
    if (f->dim() != t.target_dim() || !(f->shape() == t.shape()))
      throw DimensionMismatch("series_decompose: frame does not live in the target module");
    const ModuleOperator t_adj = t.adjoint();
    ModuleOperator partial = ModuleOperator::zero(t.shape(), t.target_dim(), t.source_dim());
    for (std::size_t j = 0; j < f->size(); ++j) {
      out.terms.push_back({f->vectors()[j], t_adj(f->dual()[j])});
      partial += theta(out.terms.back().x, out.terms.back().y);
      out.residual_norms.push_back(norm(t - partial));
    }
  }
  for (std::size_t n = 0; n < out.residual_norms.size() && !out.n_eps; ++n)
    if (out.residual_norms[n] < eps) out.n_eps = n;
  out.floor = out.residual_norms.back();
  out.covers_range = out.floor <= tol * std::max(1.0, t_norm);
  return out;
}

double orthonormality_defect(const std::vector<ModuleVector>& gens) {
  double defect = 0.0;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < gens.size(); ++j) {
      AlgebraElement g = inner(gens[i], gens[j]);
      if (i == j) g -= AlgebraElement::identity(g.shape());
      defect = std::max(defect, norm(g));
    }
  return defect;
}

Certificate free_submodule_check(const SampleSet& z, const std::vector<ModuleVector>& gens, double eps, double tol) {
  require_eps(eps, "free_submodule_check");
  if (gens.empty()) throw Error("free_submodule_check: needs at least one generator");
  for (const auto& g : gens) require_compatible(gens.front(), g, "free_submodule_check");
  const double defect = orthonormality_defect(gens);
  if (defect > tol) throw NotOrthonormal("generators are not orthonormal: Gram defect " + fmt(defect), defect);
  require_sample_in(z, gens.front().shape(), gens.front().dim(), "free_submodule_check");

  Certificate c;
  c.condition = Condition::Free;
  c.eps = eps;
  c.generators = gens;
  if (z.is_empty()) {
    Certificate v = vacuous(Condition::Free, eps);
    v.generators = gens;
    return v;
  }

  const SpanSolver solver(gens, tol);
  c.distances.assign(z.size(), 0.0);
  c.residuals.assign(z.size(), 0.0);
  parallel_for(z.size(), [&](std::size_t i) {
    const ModuleVector& x = z.points[i];
    c.distances[i] = solver.fit(x).residual;
    ModuleVector p = ModuleVector::zero(x.shape(), x.dim());
    for (const auto& e : gens) p += e * inner(e, x);
    c.residuals[i] = norm(x - p);
  });

  const std::size_t far = argmax(c.distances);
  const std::size_t worst = argmax(c.residuals);
  c.sup_error = c.residuals[worst];
  if (!(c.distances[far] < eps)) {
    c.verdict = Verdict::Fail;
    c.witness_point = far;
    c.note = "distance to the span reaches eps";
  } else if (!(c.sup_error < 2.0 * eps)) {
    c.verdict = Verdict::Fail;
    c.witness_point = worst;
    c.note = "projection residual reaches 2 eps";
  } else {
    c.verdict = Verdict::Pass;
    c.witness_point = worst;
  }
  return c;
}

}  // namespace cstar
