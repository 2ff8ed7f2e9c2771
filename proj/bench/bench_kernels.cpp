// Serial reference loop vs the OpenMP block driver on the three Monte Carlo
// kernels. Range argument: OpenMP worker count (0 means the serial loop).

#include <benchmark/benchmark.h>

#include "pcov/error_analysis.hpp"
#include "pcov/estimators.hpp"

namespace {

using namespace pcov;

Execution execution_for(const benchmark::State& state) {
  const auto workers = static_cast<int>(state.range(0));
  return workers == 0 ? Execution{Backend::serial, 1} : Execution{Backend::openmp, workers};
}

EstimatorSettings settings() {
  EstimatorSettings e;
  e.interferer_total = 10;
  e.dominant_count = 4;
  e.trials = 4096;
  return e;
}

const NetworkConfig kNetwork{1.0, 4.0, 0.1, 40.0};
const ThresholdGrid kGrid = ThresholdGrid::db_range(-20.0, 20.0, 2.0);

void BM_Hybrid(benchmark::State& state) {
  const Execution exec = execution_for(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hybrid_coverage(kNetwork, settings(), kGrid, Sampler::window, exec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(settings().trials));
}

void BM_Simulation(benchmark::State& state) {
  const Execution exec = execution_for(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(empirical_coverage(kNetwork, settings(), kGrid, {}, exec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(settings().trials));
}

void BM_ExpectedDelta(benchmark::State& state) {
  const Execution exec = execution_for(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(expected_delta_n(kNetwork, 20, 1.0, 4096, 0, kDefaultQuadTol, exec));
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}

} // namespace

BENCHMARK(BM_Hybrid)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Simulation)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExpectedDelta)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
