#include <benchmark/benchmark.h>

#include "cstar/certifier.hpp"
#include "cstar/counterexample.hpp"
#include "cstar/sampling.hpp"
#include "cstar/seminorm.hpp"

using namespace cstar;

namespace {

const AlgebraShape kShape({1, 2, 2});

void BM_FrameBuild(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(1);
  const auto vectors = random_frame_vectors(rng, kShape, dim, 2 * dim);
  for (auto _ : state) benchmark::DoNotOptimize(Frame::build(vectors));
}
BENCHMARK(BM_FrameBuild)->Arg(4)->Arg(8)->Arg(16);

void BM_TailProfile(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(2);
  const Frame frame = Frame::build(random_frame_vectors(rng, kShape, dim, 2 * dim));
  const ModuleVector x = random_vector(rng, kShape, dim);
  for (auto _ : state) benchmark::DoNotOptimize(frame.tail_profile(x));
}
BENCHMARK(BM_TailProfile)->Arg(4)->Arg(8)->Arg(16);

void BM_Seminorm(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(3);
  std::vector<ModuleVector> gens;
  for (int i = 0; i < dim; ++i) gens.push_back(random_vector(rng, kShape, dim));
  SeminormSpec spec;
  for (auto& w : orthonormalize(gens)) {
    spec.system.push_back(std::move(w));
    spec.states.push_back(random_state(rng, kShape));
  }
  const ModuleVector x = random_vector(rng, kShape, dim);
  for (auto _ : state) benchmark::DoNotOptimize(seminorm(spec, x));
}
BENCHMARK(BM_Seminorm)->Arg(4)->Arg(8)->Arg(16);

void BM_CertifyEquivalences(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto points = BallSampler{4, 64, true}.draw(kShape, dim);
  const SampleSet z = SampleSet::of(points);
  EquivalenceConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(certify_equivalences(z, config));
}
BENCHMARK(BM_CertifyEquivalences)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_CounterexampleOperator(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const TruncatedCSetting setting = build_setting(m, m);
  OperatorOptions opts;
  opts.budget = static_cast<std::size_t>(m - 1);
  for (auto _ : state) benchmark::DoNotOptimize(operator_precompact(setting.f, BallSampler{5, 32, true}, 0.25, opts));
}
BENCHMARK(BM_CounterexampleOperator)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_CoeffGrowth(benchmark::State& state) {
  const TruncatedCSetting setting = build_setting(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(coeff_growth(setting, 0.1));
}
BENCHMARK(BM_CoeffGrowth)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
