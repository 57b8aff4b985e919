// Serial reference runner vs the OpenMP trial-parallel runner on the same
// experiment. Arguments: trials (serial) / trials,threads (parallel).
#include <benchmark/benchmark.h>

#include "cjs/experiment.hpp"

namespace {

cjs::ExperimentConfig config_for(std::size_t trials) {
    cjs::ExperimentConfig c;
    c.n = 1000;
    c.trials = trials;
    c.seed = 42;
    c.estimators = {"js+", "lindley+", "js2", "hybrid4"};
    c.theta.kind = cjs::ThetaKind::clustered;
    c.theta.centers = {1.0, -1.0};
    c.theta.widths = {0.5, 0.5};
    c.theta.fractions = {0.5, 0.5};
    c.theta.tau = 2.0;
    c.theory_overlay = false;
    return c;
}

void BM_serial(benchmark::State& state) {
    const auto c = config_for(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(cjs::run_experiment_reference(c));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_parallel(benchmark::State& state) {
    const auto c = config_for(static_cast<std::size_t>(state.range(0)));
    const cjs::RunOptions opt{static_cast<int>(state.range(1))};
    for (auto _ : state) benchmark::DoNotOptimize(cjs::run_experiment(c, opt));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_serial)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_parallel)->Args({200, 1})->Args({200, 2})->Args({200, 4})->Args({200, 8})
    ->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
