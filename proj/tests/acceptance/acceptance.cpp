// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all
// pass. Optional arguments --cli PATH --fixtures DIR enable the command line
// half of the determinism criterion.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cstar/certifier.hpp"
#include "cstar/counterexample.hpp"
#include "cstar/io.hpp"
#include "cstar/seminorm.hpp"
#include "oracles.hpp"
#include "planted.hpp"

using namespace cstar;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

struct CorpusFrame {
  std::vector<ModuleVector> vectors;
  Frame frame;
};

/// >= 200 random frames: shapes mixing 1x1 and 2x2 blocks, module dimensions
/// 2..6, frame sizes max(2, dim)..10. Two thirds are Gaussian families, one
/// third perturbed unions of orthonormal bases.
std::vector<CorpusFrame> frame_corpus(std::uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<CorpusFrame> out;
  for (int i = 0; i < count; ++i) {
    const AlgebraShape s = random_mixed_shape(rng, 2 + i % 2);
    const int dim = 2 + static_cast<int>(rng() % 5);
    const int size = dim + static_cast<int>(rng() % static_cast<unsigned>(11 - dim));
    std::vector<ModuleVector> vectors;
    if (i % 3 == 2) {
      // Near-tight: orthonormal bases cut to `size` vectors, each perturbed by 10%.
      while (static_cast<int>(vectors.size()) < size) {
        auto basis = planted::orthonormal_family(rng, s, dim, dim);
        const int take = std::min(dim, size - static_cast<int>(vectors.size()));
        vectors.insert(vectors.end(), basis.begin(), basis.begin() + take);
      }
      for (auto& v : vectors) v += random_vector_with_norm(rng, s, dim, 0.1);
    } else {
      vectors = random_frame_vectors(rng, s, dim, size);
    }
    Frame f = Frame::build(vectors);
    out.push_back({std::move(vectors), std::move(f)});
  }
  return out;
}

Outcome criterion_frame_bounds(const std::vector<CorpusFrame>& corpus) {
  Rng rng(101);
  double worst_slack = 0.0;
  double worst_residual = 0.0;
  for (const auto& c : corpus) {
    const auto [c1, c2] = c.frame.bounds();
    const AlgebraShape& s = c.frame.shape();
    const int dim = c.frame.dim();
    // S assembled independently as sum_j theta_{x_j, x_j}.
    ModuleOperator sum = ModuleOperator::zero(s, dim, dim);
    for (const auto& x : c.vectors) sum += theta(x, x);
    for (const auto& b : sum.blocks()) {
      const Matrix h = (b + b.adjoint()) / 2.0;
      const auto ev = Eigen::SelfAdjointEigenSolver<Matrix>(h).eigenvalues();
      worst_slack = std::max(worst_slack, c1 - ev.minCoeff());
      worst_slack = std::max(worst_slack, ev.maxCoeff() - c2);
    }
    for (int probe = 0; probe < 5; ++probe) {
      const ModuleVector x = random_vector_with_norm(rng, s, dim, 1.0);
      const AlgebraElement fs = oracle::frame_sum(c.vectors, x);
      const AlgebraElement xx = inner(x, x);
      worst_slack = std::max(worst_slack, -oracle::min_eig(fs - xx * Complex(c1)));
      worst_slack = std::max(worst_slack, -oracle::min_eig(xx * Complex(c2) - fs));
      ModuleVector rec = ModuleVector::zero(s, dim);
      for (std::size_t j = 0; j < c.frame.size(); ++j) rec += c.vectors[j] * inner(c.frame.dual()[j], x);
      worst_residual = std::max(worst_residual, norm(x - rec));
    }
  }
  return {worst_slack <= 1e-8 && worst_residual <= 1e-9,
          std::to_string(corpus.size()) + " frames, max bound slack " + num(worst_slack) +
              ", max reconstruction residual " + num(worst_residual)};
}

Outcome criterion_partial_sums(const std::vector<CorpusFrame>& corpus) {
  Rng rng(102);
  double worst_excess = -INFINITY;
  double best_fraction = 0.0;
  double best_ratio = INFINITY;
  std::size_t instances = 0;
  for (const auto& c : corpus) {
    const double ratio = c.frame.bounds().upper / c.frame.bounds().lower;
    best_ratio = std::min(best_ratio, ratio);
    for (int t = 0; t < 5; ++t) {
      // Uniform random size, then a uniform subset of that size.
      std::vector<std::size_t> subset(c.frame.size());
      std::iota(subset.begin(), subset.end(), std::size_t{0});
      std::shuffle(subset.begin(), subset.end(), rng);
      subset.resize(1 + rng() % c.frame.size());
      std::sort(subset.begin(), subset.end());
      const double p = norm(c.frame.partial_sum(subset));
      worst_excess = std::max(worst_excess, p - ratio);
      best_fraction = std::max(best_fraction, p / ratio);
      ++instances;
    }
  }
  return {worst_excess <= 1e-8 && best_fraction >= 0.5,
          std::to_string(instances) + " subsets, max ||P_J|| - c2/c1 = " + num(worst_excess) +
              ", largest ||P_J|| / (c2/c1) = " + num(best_fraction) + ", smallest c2/c1 = " + num(best_ratio)};
}

Outcome criterion_seminorm() {
  Rng rng(103);
  double worst_dominance = -INFINITY;
  double worst_axiom = 0.0;
  int draws = 0;
  bool all_admissible = true;
  for (int spec_index = 0; spec_index < 100; ++spec_index) {
    const AlgebraShape s = random_mixed_shape(rng, 2);
    const int dim = 2 + spec_index % 4;
    const SeminormSpec spec = planted::admissible_spec(rng, s, dim, 1 + spec_index % dim);
    all_admissible = all_admissible && admissible_check(spec.system, SampleSet::empty(s, dim)).admissible;
    for (int k = 0; k < 10; ++k, ++draws) {
      const ModuleVector x = random_vector(rng, s, dim);
      const ModuleVector y = random_vector(rng, s, dim);
      const Complex lambda(std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng));
      const double nx = seminorm(spec, x);
      worst_dominance = std::max(worst_dominance, nx - norm(x));
      worst_axiom = std::max(worst_axiom, seminorm(spec, x + y) - nx - seminorm(spec, y));
      worst_axiom = std::max(worst_axiom, std::abs(seminorm(spec, x * lambda) - std::abs(lambda) * nx));
    }
  }
  return {all_admissible && worst_dominance <= 1e-12 && worst_axiom <= 1e-9,
          std::to_string(draws) + " draws, max nu(x) - ||x|| = " + num(worst_dominance) + ", max axiom defect " +
              num(worst_axiom)};
}

Outcome criterion_transfer() {
  Rng rng(104);
  int pairs = 0;
  int specs_checked = 0;
  double worst_ratio = 0.0;
  bool ok = true;
  for (; pairs < 50; ++pairs) {
    const AlgebraShape s = random_mixed_shape(rng, 2);
    const int dim = 2 + pairs % 3;
    const double eps = 0.05 + 0.05 * (pairs % 4);
    std::vector<ModuleVector> sp, se;
    for (int i = 0; i < 30; ++i) {
      sp.push_back(random_vector_with_norm(rng, s, dim, 1.0));
      se.push_back(sp.back() + random_vector_with_norm(rng, s, dim, 0.99 * eps));
    }
    const SampleSet S = SampleSet::of(sp);
    const SampleSet Se = SampleSet::of(se);
    for (int k = 0; k < 3; ++k, ++specs_checked) {
      const SeminormSpec spec = planted::admissible_spec(rng, s, dim, 1 + k);
      const NetTransfer t = net_transfer(S, Se, spec, eps);
      // Exhaustive recheck of the cover on S.
      double radius = 0.0;
      for (const auto& x : S.points) {
        double d = INFINITY;
        for (std::size_t j : t.net) d = std::min(d, pseudometric(spec, x, S.points[j]));
        radius = std::max(radius, d);
      }
      worst_ratio = std::max(worst_ratio, radius / eps);
      ok = ok && t.covers && radius < 6 * eps;
    }
  }
  return {ok, std::to_string(pairs) + " pairs x 3 specs (" + std::to_string(specs_checked) +
                  " checks), max cover radius / eps = " + num(worst_ratio)};
}

Outcome criterion_equivalences() {
  Rng rng(105);
  const double eps = 0.25;
  int precompact_ok = 0;
  int precompact_total = 0;
  std::size_t violations = 0;
  std::string first_violation;
  auto note = [&](const EquivalenceReport& r) {
    violations += r.violations.size();
    if (first_violation.empty() && !r.violations.empty()) first_violation = r.violations.front();
  };

  for (int i = 0; i < 24; ++i, ++precompact_total) {
    const AlgebraShape s = random_mixed_shape(rng, 2);
    const int dim = 3 + i % 3;
    const int prefix = 1 + i % (dim - 1);
    const SampleSet z = planted::precompact_sample(rng, s, dim, prefix, 30, eps);
    std::vector<ModuleVector> basis;
    for (int j = 0; j < dim; ++j) basis.push_back(ModuleVector::basis(s, dim, j));
    EquivalenceConfig config;
    config.eps = eps;
    switch (i % 3) {
      case 0:  // Parseval frame, generators e_1..e_prefix, budget prefix
        config.frame = Frame::build(basis);
        config.generators = std::vector<ModuleVector>(basis.begin(), basis.begin() + prefix);
        config.budget = static_cast<std::size_t>(prefix);
        break;
      case 1: {  // non-tight frame {e_1, e_1, e_2, ...}: c2/c1 = 2
        std::vector<ModuleVector> v = basis;
        v.insert(v.begin(), basis.front());
        config.frame = Frame::build(v);
        config.generators = std::vector<ModuleVector>(basis.begin(), basis.begin() + prefix);
        config.budget = static_cast<std::size_t>(prefix + 1);
        break;
      }
      default:  // the sample's own coordinate Parseval frame and default budget
        break;
    }
    const auto r = certify_equivalences(z, config);
    note(r);
    if (r.a.verdict == Verdict::Pass && r.b.verdict == Verdict::Pass && r.cd.verdict == Verdict::Pass) ++precompact_ok;
  }

  int bad_ok = 0;
  int bad_total = 0;
  bool growth = true;
  std::vector<double> bound_by_m(9, 0.0);
  for (int i = 0; i < 24; ++i, ++bad_total) {
    const int m = 3 + i % 6;
    const TruncatedCSetting setting = build_setting(m + i % 2, m);
    const SampleSet z = planted::counterexample_sample(setting, 1000 + static_cast<std::uint64_t>(i), 24);
    EquivalenceConfig config;
    config.eps = 0.5;
    config.frame = setting.standard_frame();
    config.generators = std::vector<ModuleVector>{setting.v};
    config.budget = static_cast<std::size_t>(m - 1);
    const auto r = certify_equivalences(z, config);
    note(r);
    const bool a_ok = r.a.verdict == Verdict::Pass && *r.a.coefficient_bound >= (1 - r.eps_a) * oracle::factorial(m) * (1 - 1e-12);
    if (a_ok && r.b.verdict == Verdict::Fail && r.cd.verdict == Verdict::Fail) ++bad_ok;
    bound_by_m[static_cast<std::size_t>(m)] = std::max(bound_by_m[static_cast<std::size_t>(m)], *r.a.coefficient_bound);
  }
  for (int m = 4; m <= 8; ++m) growth = growth && bound_by_m[static_cast<std::size_t>(m)] > bound_by_m[static_cast<std::size_t>(m - 1)];

  std::string detail = "precompact " + std::to_string(precompact_ok) + "/" + std::to_string(precompact_total) +
                       " all pass; non-precompact " + std::to_string(bad_ok) + "/" + std::to_string(bad_total) +
                       " (a passes, b and c/d fail); M_eps at M=3..8: " + num(bound_by_m[3]) + " .. " +
                       num(bound_by_m[8]) + "; violations " + std::to_string(violations);
  if (!first_violation.empty()) detail += " (first: " + first_violation + ")";
  return {precompact_ok == precompact_total && bad_ok == bad_total && growth && violations == 0, detail};
}

Outcome criterion_counterexample() {
  bool ok = true;
  double worst_tail = 0.0;
  double worst_growth = INFINITY;
  for (int m : {4, 8, 16}) {
    const TruncatedCSetting setting = build_setting(m, m);
    for (int n = 0; n < m; ++n) worst_tail = std::max(worst_tail, std::abs(tail_obstruction(setting, n) - 1.0));
    for (const auto& row : coeff_growth(setting, 0.1)) {
      ok = ok && row.factorial == oracle::factorial(row.k);
      // The infimum equals 0.9 k! exactly; 1e-12 relative slack covers rounding.
      const double ratio = row.required_norm / (0.9 * row.factorial);
      worst_growth = std::min(worst_growth, ratio);
    }
  }
  ok = ok && worst_tail <= 1e-12 && worst_growth >= 1.0 - 1e-12;
  return {ok, "truncations 4, 8, 16: max |tail - 1| = " + num(worst_tail) +
                  ", min required / (0.9 k!) = " + num(worst_growth)};
}

Outcome criterion_series() {
  Rng rng(107);
  double worst_increase = 0.0;
  double worst_floor = 0.0;
  int count = 0;
  for (; count < 60; ++count) {
    const AlgebraShape s = random_mixed_shape(rng, 2);
    const int m = 2 + count % 4;
    const int n = 2 + (count / 4) % 4;
    const int inner_dim = 1 + count % 3;
    // Low-rank products exercise proper ranges.
    const ModuleOperator t = count % 2 == 0 ? random_operator(rng, s, m, n)
                                            : random_operator(rng, s, m, inner_dim) * random_operator(rng, s, inner_dim, n);
    std::vector<ModuleVector> range_gens;
    for (int j = 0; j < n + 1; ++j) range_gens.push_back(t(random_vector(rng, s, n)));
    const Frame frame = Frame::build(orthonormalize(range_gens), FrameScope::Span);
    const auto series = series_decompose(t, frame, 0.1);
    const double scale = std::max(1.0, norm(t));
    for (std::size_t k = 1; k < series.residual_norms.size(); ++k)
      worst_increase = std::max(worst_increase, (series.residual_norms[k] - series.residual_norms[k - 1]) / scale);
    worst_floor = std::max(worst_floor, series.residual_norms.back());
  }
  return {worst_increase <= 1e-12 && worst_floor <= 1e-9,
          std::to_string(count) + " operators, max relative increase " + num(worst_increase) +
              ", max ||T - S_L|| = " + num(worst_floor)};
}

Outcome criterion_witness() {
  bool ok = true;
  double worst = INFINITY;
  for (int m : {4, 8, 16}) {
    const TruncatedCSetting setting = build_setting(m, m);
    std::vector<ModuleVector> t{ModuleVector::zero(setting.shape, m)};
    for (int k = 1; k <= m; ++k) t.push_back(setting.witness(k));
    std::vector<int> schedule;
    for (int j = 0; j <= m; ++j) schedule.push_back(j);
    const auto w = adversarial_witness(SampleSet::of(t), schedule, 1.0);
    ok = ok && w.admissibility.admissible && w.separated;
    for (std::size_t i = 0; i < w.observed_separation.size(); ++i) {
      worst = std::min(worst, w.observed_separation[i]);
      worst = std::min(worst, w.guaranteed_separation[i]);
    }
  }
  ok = ok && worst >= 0.25 - 1e-6;
  return {ok, "truncations 4, 8, 16 with delta = 1: admissible, min separation " + num(worst) + " >= 0.249999"};
}

Outcome criterion_free() {
  Rng rng(109);
  int sets = 0;
  double worst_ratio = 0.0;
  bool ok = true;
  for (; sets < 24; ++sets) {
    const AlgebraShape s = random_mixed_shape(rng, 2);
    const int dim = 3 + sets % 3;
    const int rank = 1 + sets % (dim - 1);
    const auto family = planted::orthonormal_family(rng, s, dim, dim);
    const std::vector<ModuleVector> gens(family.begin(), family.begin() + rank);
    const double eps = 0.1 + 0.05 * (sets % 3);
    const double offset = eps * (0.5 + 0.4 * (sets % 5) / 4.0);
    std::vector<ModuleVector> pts;
    for (int i = 0; i < 20; ++i) {
      ModuleVector in = ModuleVector::zero(s, dim);
      for (const auto& g : gens) in += g * random_element(rng, s);
      ModuleVector off = ModuleVector::zero(s, dim);
      for (int j = rank; j < dim; ++j) off += family[static_cast<std::size_t>(j)] * random_element(rng, s);
      off *= Complex(offset / norm(off));
      pts.push_back(in + off);
    }
    const Certificate c = free_submodule_check(SampleSet::of(pts), gens, eps);
    ok = ok && c.verdict == Verdict::Pass;
    for (double r : c.residuals) {
      ok = ok && r < 2 * eps;
      worst_ratio = std::max(worst_ratio, r / eps);
    }
  }
  return {ok, std::to_string(sets) + " planted sets, max residual / eps = " + num(worst_ratio) + " < 2"};
}

/// Certificates of a fixed pipeline, concatenated.
std::string certificate_suite(std::uint64_t seed) {
  Rng rng(seed);
  std::string out;
  const AlgebraShape s({1, 2});
  const ModuleOperator t = random_operator(rng, s, 3, 3);
  out += io::serialize(operator_precompact(t, BallSampler{seed, 32, true}, 0.25));
  const SampleSet z = planted::precompact_sample(rng, s, 4, 2, 30, 0.25);
  EquivalenceConfig config;
  config.eps = 0.25;
  out += io::serialize(certify_equivalences(z, config));
  const TruncatedCSetting setting = build_setting(8, 8);
  out += io::serialize(operator_precompact(setting.f, BallSampler{seed, 32, true}, 0.25, {7, std::nullopt, 1e-10}));
  out += io::serialize(series_decompose(t, std::nullopt, 0.1));
  return out;
}

std::string run_capture(const std::string& command, int& status) {
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (pipe == nullptr) {
    status = -1;
    return out;
  }
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  status = pclose(pipe);
  return out;
}

Outcome criterion_determinism(const std::string& cli, const std::string& fixtures) {
  const std::string a = certificate_suite(2024);
  const std::string b = certificate_suite(2024);
  bool ok = a == b && !a.empty();
  std::string detail = "in-process suite " + std::to_string(a.size()) + " bytes " + (a == b ? "identical" : "DIFFER");
  if (!cli.empty()) {
    const std::vector<std::string> commands{
        cli + " precompact --condition all --eps 0.25 --sample " + fixtures + "/planted.json",
        cli + " precompact --operator " + fixtures + "/theta_operator.json --seed 7 --eps 0.25",
        cli + " precompact --operator " + fixtures + "/counterexample_operator.json --seed 7",
        cli + " counterexample --trunc 8 --dim 8 --eps 0.25",
    };
    std::size_t bytes = 0;
    for (const auto& cmd : commands) {
      int s1 = 0, s2 = 0;
      const std::string first = run_capture(cmd, s1);
      const std::string second = run_capture("CSTAR_FRAMES_THREADS=1 " + cmd, s2);
      ok = ok && !first.empty() && first == second && s1 == s2;
      bytes += first.size();
    }
    detail += "; CLI " + std::to_string(commands.size()) + " commands, " + std::to_string(bytes) + " bytes " +
              (ok ? "identical" : "DIFFER");
  } else {
    detail += "; CLI half skipped (no --cli given)";
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::string fixtures;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--cli") cli = argv[i + 1];
    if (flag == "--fixtures") fixtures = argv[i + 1];
  }

  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& run, double limit_seconds = 0.0) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_seconds > 0.0 && seconds > limit_seconds) {
      o.pass = false;
      o.detail += "; runtime limit " + num(limit_seconds) + " s exceeded";
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << name << ": " << o.detail << " ["
              << num(seconds) << " s]" << std::endl;
  };

  std::vector<CorpusFrame> corpus;
  report(1, "frame bounds and dual reconstruction", [&] {
    corpus = frame_corpus(100, 220);
    return criterion_frame_bounds(corpus);
  }, 30.0);
  report(2, "partial-sum norm bound", [&] { return criterion_partial_sums(corpus); });
  report(3, "seminorm dominance and axioms", criterion_seminorm);
  report(4, "6 eps net transfer", criterion_transfer);
  report(5, "equivalence coherence", criterion_equivalences);
  report(6, "counterexample reproduction", criterion_counterexample, 5.0);
  report(7, "series decomposition", criterion_series);
  report(8, "adversarial witness separation", criterion_witness);
  report(9, "free-submodule 2 eps amplification", criterion_free);
  report(10, "determinism", [&] { return criterion_determinism(cli, fixtures); });

  std::cout << (failures == 0 ? "all acceptance criteria pass" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
