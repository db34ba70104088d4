// Serial reference vs OpenMP fan-out for the randomized-election trials.
// Both kernels return identical outcome vectors; only wall time differs.

#include <benchmark/benchmark.h>

#include "obring/montecarlo.hpp"

namespace {

obring::RandomizedTrialSpec spec_for(std::uint64_t bound, bool simulate) {
    obring::RandomizedTrialSpec spec;
    spec.params = obring::RandomizedParams::with_c(bound, 1, 1);
    spec.n_choices = {static_cast<std::size_t>(bound / 2), static_cast<std::size_t>(bound)};
    spec.master_seed = 1;
    spec.simulate = simulate;
    return spec;
}

void BM_TrialsSerial(benchmark::State& state) {
    const auto spec = spec_for(static_cast<std::uint64_t>(state.range(0)), state.range(1) != 0);
    for (auto _ : state) benchmark::DoNotOptimize(obring::run_trials_serial(spec, 256));
    state.SetItemsProcessed(state.iterations() * 256);
}

void BM_TrialsParallel(benchmark::State& state) {
    const auto spec = spec_for(static_cast<std::uint64_t>(state.range(0)), state.range(1) != 0);
    for (auto _ : state) benchmark::DoNotOptimize(obring::run_trials_parallel(spec, 256));
    state.SetItemsProcessed(state.iterations() * 256);
}

}  // namespace

// {U, simulate}
BENCHMARK(BM_TrialsSerial)->Args({8, 1})->Args({16, 1})->Args({16, 0})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrialsParallel)->Args({8, 1})->Args({16, 1})->Args({16, 0})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
