// Trial loop and density tabulation, OpenMP vs serial reference.

#include <benchmark/benchmark.h>

#include "polyesd/harness.hpp"

using namespace polyesd;

namespace {

ExperimentConfig trial_config(std::size_t n) {
  ExperimentConfig c;
  c.name = "bench";
  c.scheme = WeightScheme::kac(1.0);
  c.sizes = {{n, 2}};
  c.trials = 16;
  c.master_seed = 1;
  return c;
}

void BM_RunParallel(benchmark::State& state) {
  const auto cfg = trial_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg));
}

void BM_RunSerial(benchmark::State& state) {
  const auto cfg = trial_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_serial(cfg));
}

std::vector<double> radii(std::size_t count) {
  std::vector<double> r(count);
  for (std::size_t i = 0; i < count; ++i) r[i] = 4.0 * static_cast<double>(i) / static_cast<double>(count);
  return r;
}

void BM_TabulateParallel(benchmark::State& state) {
  const auto law = LimitDensity::from_scheme(WeightScheme::weyl(1.0), static_cast<int>(state.range(0)));
  const auto r = radii(4096);
  for (auto _ : state) benchmark::DoNotOptimize(tabulate_density(law, r));
}

void BM_TabulateSerial(benchmark::State& state) {
  const auto law = LimitDensity::from_scheme(WeightScheme::weyl(1.0), static_cast<int>(state.range(0)));
  const auto r = radii(4096);
  for (auto _ : state) benchmark::DoNotOptimize(tabulate_density_serial(law, r));
}

}  // namespace

BENCHMARK(BM_RunParallel)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RunSerial)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TabulateParallel)->Arg(50)->Arg(2000)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_TabulateSerial)->Arg(50)->Arg(2000)->Unit(benchmark::kMicrosecond)->UseRealTime();

BENCHMARK_MAIN();
