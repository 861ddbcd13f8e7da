#include <benchmark/benchmark.h>

#include "evo/balls_bins.hpp"
#include "evo/experiments.hpp"

using namespace evo;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_BallsBins(benchmark::State& state) {
  for (auto _ : state) {
    auto r = balls_and_bins_trial(10000, 3.0, 256, ForbiddenBinPolicy::adversarial_lowest, 1,
                                  exec_of(state));
    benchmark::DoNotOptimize(r.max_sum);
  }
  label(state);
}
BENCHMARK(BM_BallsBins)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Sweep(benchmark::State& state) {
  ExperimentConfig c;
  c.n_list = {128, 256};
  c.seeds = {1, 2, 3, 4, 5, 6, 7, 8};
  c.steps = 200000;
  for (auto _ : state) {
    auto runs = run_sweep(c, exec_of(state));
    benchmark::DoNotOptimize(runs.data());
  }
  label(state);
}
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_LemmaChecks(benchmark::State& state) {
  ExperimentConfig c;
  c.n_list = {16};
  c.seeds = {1, 2, 3, 4, 5, 6, 7, 8};
  c.rounds = 4;
  for (auto _ : state) {
    auto s = lemma_checks(c, exec_of(state));
    benchmark::DoNotOptimize(s.runs);
  }
  label(state);
}
BENCHMARK(BM_LemmaChecks)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
