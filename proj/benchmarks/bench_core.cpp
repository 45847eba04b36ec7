#include <benchmark/benchmark.h>

#include "rmteq/analytics.hpp"
#include "rmteq/dephasing.hpp"
#include "rmteq/ensemble.hpp"

using namespace rmteq;

static void BM_SampleAndDiagonalise(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RngStream rng(1);
  for (auto _ : state) {
    const Spectrum s = eigendecompose(sample_gue(n, 1.0 / std::sqrt(double(n)), rng));
    benchmark::DoNotOptimize(s.energies.data());
  }
}
BENCHMARK(BM_SampleAndDiagonalise)->RangeMultiplier(2)->Range(4, 256);

static void BM_TimeSignal(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const SampleState s = prepare_sample(SizeSpec::from_spins(l), SigmaRule{}, StateKind::HaarRandom,
                                       GridRule{}, 7);
  const std::vector<double> times = s.grid.times();
  for (auto _ : state) {
    const SignalTrace t = time_signal(s.data, times);
    benchmark::DoNotOptimize(t.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(times.size()));
}
BENCHMARK(BM_TimeSignal)->DenseRange(2, 8, 2);

static void BM_SimulateSample(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.sizes = {SizeSpec::from_spins(static_cast<int>(state.range(0)))};
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_sample(cfg, 0, k++ % 200));
}
BENCHMARK(BM_SimulateSample)->DenseRange(4, 8, 2);

static void BM_QuadratureGapDispersion(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(quadrature_gap_dispersion(KernelContext(n, 1.0)));
}
BENCHMARK(BM_QuadratureGapDispersion)->DenseRange(2, 8, 2);

static void BM_QuadratureFourthMoment(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(quadrature_fourth_moment(KernelContext(n, 1.0)));
}
BENCHMARK(BM_QuadratureFourthMoment)->DenseRange(2, 8, 2);
BENCHMARK_MAIN();
