// Microbenchmarks for the moment kernels and the epsilon solver, covering
// the paths the sweep commands spend their time in.

#include <benchmark/benchmark.h>

#include "tdnoise/quality.hpp"

using namespace tdnoise;

namespace {

Matrix2 bench_state() { return density_from_point({0.3, -0.1, 0.4}); }

void bm_design_moment_dense(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const UnitaryEnsemble ico = icosahedral_design();
  const ComplexMatrix m = tensor_power(bench_state(), t);
  for (auto _ : state) benchmark::DoNotOptimize(design_moment(ico, m, t));
}

void bm_design_moment_product(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const UnitaryEnsemble ico = icosahedral_design();
  const Matrix2 sigma = bench_state();
  for (auto _ : state) benchmark::DoNotOptimize(design_moment_product(ico, sigma, t));
}

void bm_haar_oracle(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const ComplexMatrix m = tensor_power(bench_state(), t);
  for (auto _ : state) benchmark::DoNotOptimize(haar_moment_oracle(m, t));
}

void bm_min_epsilon(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const UnitaryEnsemble ico = icosahedral_design();
  const Matrix2 rho = bench_state();
  const KrausChannel ch = make_channel(ChannelKind::BitFlip, 0.3);
  const ComplexMatrix a = exact_moment(rho, t, ico);
  const ComplexMatrix b = noisy_moment(rho, t, ico, ch, NoiseModel::Before);
  const EpsilonMode mode = EpsilonMode::support_projected();
  for (auto _ : state) benchmark::DoNotOptimize(min_epsilon(a, b, mode));
}

void bm_sweep_evaluate(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const SampleEvaluator evaluator(spherical_grid(BlochGridSpec{}), t, icosahedral_design(),
                                  EpsilonMode::support_projected());
  const KrausChannel ch = make_channel(ChannelKind::PhaseDamping, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(evaluator.evaluate(ch, NoiseModel::Before));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(evaluator.sample().size()));
}

void bm_evaluator_construction(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const std::vector<BlochPoint> grid = spherical_grid(BlochGridSpec{});
  const UnitaryEnsemble ico = icosahedral_design();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        SampleEvaluator(grid, t, ico, EpsilonMode::support_projected()));
}

BENCHMARK(bm_design_moment_dense)->DenseRange(1, 5);
BENCHMARK(bm_design_moment_product)->DenseRange(1, 5);
BENCHMARK(bm_haar_oracle)->DenseRange(1, 5);
BENCHMARK(bm_min_epsilon)->DenseRange(2, 5);
BENCHMARK(bm_sweep_evaluate)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_evaluator_construction)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
