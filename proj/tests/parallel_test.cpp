#include <gtest/gtest.h>

#include <stdexcept>

#include "evo/experiments.hpp"

using namespace evo;

TEST(ParallelTest, FanOutKeepsIndexOrder) {
  const auto out = fan_out<int>(1000, [](std::size_t k) { return static_cast<int>(k * k % 97); },
                                Execution::parallel);
  for (std::size_t k = 0; k < out.size(); ++k) EXPECT_EQ(out[k], static_cast<int>(k * k % 97));
  EXPECT_GE(max_threads(), 1);
}

TEST(ParallelTest, FanOutRethrows) {
  EXPECT_THROW(fan_out<int>(
                   64,
                   [](std::size_t k) -> int {
                     if (k == 33) throw std::runtime_error("boom");
                     return 0;
                   },
                   Execution::parallel),
               std::runtime_error);
}

TEST(ParallelTest, SweepIsScheduleIndependent) {
  ExperimentConfig c;
  c.n_list = {16, 32};
  c.seeds = {1, 2, 3, 4};
  c.steps = 3000;
  c.sample_every = 50;
  const auto a = run_sweep(c, Execution::serial);
  const auto b = run_sweep(c, Execution::parallel);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].spec.seed, b[k].spec.seed);
    ASSERT_EQ(a[k].result.series.size(), b[k].result.series.size());
    for (std::size_t i = 0; i < a[k].result.series.size(); ++i) {
      EXPECT_EQ(a[k].result.series[i].I, b[k].result.series[i].I);
    }
    EXPECT_EQ(a[k].round_good_swaps, b[k].round_good_swaps);
  }
  EXPECT_EQ(to_json(summarize_steady_state(a, c)), to_json(summarize_steady_state(b, c)));
}

TEST(ParallelTest, ConvergenceAndLemmaChecksAreScheduleIndependent) {
  ExperimentConfig c;
  c.n_list = {16, 32};
  c.seeds = {1, 2, 3};
  EXPECT_EQ(to_json(convergence_time(c, 1.0, Execution::serial)),
            to_json(convergence_time(c, 1.0, Execution::parallel)));
  c.rounds = 2;
  EXPECT_EQ(to_json(lemma_checks(c, Execution::serial)),
            to_json(lemma_checks(c, Execution::parallel)));
}
