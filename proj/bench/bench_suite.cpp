#include <benchmark/benchmark.h>

#include "meanforge/harness.hpp"

using namespace meanforge;

namespace {

TrialConfig bench_config(int trials) {
  TrialConfig cfg;
  cfg.trials = trials;
  return cfg;
}

void BM_SuiteSerial(benchmark::State& state) {
  const TrialConfig cfg = bench_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_suite_serial(cfg).evaluations());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SuiteParallel(benchmark::State& state) {
  const TrialConfig cfg = bench_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_suite(cfg).evaluations());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PowerMean(benchmark::State& state) {
  Rng rng(7);
  const int dim = static_cast<int>(state.range(0));
  std::vector<HpdMatrix> mats;
  for (int i = 0; i < 5; ++i) mats.push_back(gen_hpd(dim, 1.0, 10.0, false, rng));
  const MatrixTuple tuple(mats, WeightVector::uniform(mats.size()));
  for (auto _ : state) benchmark::DoNotOptimize(power_mean(tuple, 0.5).report.iterations);
}

void BM_KarcherMean(benchmark::State& state) {
  Rng rng(8);
  const int dim = static_cast<int>(state.range(0));
  std::vector<HpdMatrix> mats;
  for (int i = 0; i < 5; ++i) mats.push_back(gen_hpd(dim, 1.0, 10.0, false, rng));
  const MatrixTuple tuple(mats, WeightVector::uniform(mats.size()));
  for (auto _ : state) benchmark::DoNotOptimize(karcher_mean(tuple).report.iterations);
}

}  // namespace

BENCHMARK(BM_SuiteSerial)->Arg(27)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SuiteParallel)->Arg(27)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PowerMean)->Arg(2)->Arg(5)->Arg(8);
BENCHMARK(BM_KarcherMean)->Arg(2)->Arg(5)->Arg(8);

BENCHMARK_MAIN();
