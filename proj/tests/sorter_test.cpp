#include <gtest/gtest.h>

#include "evo/frozen.hpp"
#include "evo/sorter.hpp"

using namespace evo;

namespace {

// Textbook insertion sort written against the raw step protocol; one loop
// guard evaluation per step.
std::uint64_t reference_round(EvolvingState& s) {
  std::uint64_t steps = 0;
  for (Position i = 1; i < s.n(); ++i) {
    Position j = i;
    while (true) {
      ++steps;
      if (j == 0) {
        s.compare_short_circuit();
        s.finish_step();
        break;
      }
      if (s.compare(j, j - 1) == Ordering::a_first) {
        s.sorter_swap(j);
        s.finish_step();
        --j;
      } else {
        s.finish_step();
        break;
      }
    }
  }
  return steps;
}

RoundRecord one_round(SorterMachine& m, EvolvingState& s) {
  while (m.advance(s) != StepOutcome::round_completed) {
  }
  return *m.last_completed();
}

}  // namespace

TEST(SorterTest, KindNames) {
  for (auto k : {SorterKind::repeated_insertion, SorterKind::quick_then_insertion,
                 SorterKind::repeated_quicksort}) {
    EXPECT_EQ(parse_sorter_kind(to_string(k)), k);
  }
  EXPECT_EQ(parse_sorter_kind("quick_then_insertion"), SorterKind::quick_then_insertion);
  EXPECT_THROW(parse_sorter_kind("bubble"), std::invalid_argument);
}

TEST(SorterTest, FrozenReversedRoundIsExtremal) {
  EvolvingState s(8, 0, InitPolicy::reversed, 1);
  SorterMachine m(SorterKind::repeated_insertion, s);
  const RoundRecord r = one_round(m, s);
  EXPECT_EQ(r.F, 28);
  EXPECT_EQ(r.length(), 35);
  EXPECT_EQ(s.inversions(), 0);
  const RoundCheck c = check_round(r, 8);
  EXPECT_TRUE(c.ok());
  // Every guard evaluation is a step, so the longest round exceeds n^2/2.
  EXPECT_GE(2 * r.length(), 64);
}

TEST(SorterTest, MachineMatchesReferenceLoop) {
  for (int alpha : {0, 1, 2}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      EvolvingState a(24, alpha, InitPolicy::uniform_random, seed);
      EvolvingState b = a;
      SorterMachine m(SorterKind::repeated_insertion, a);
      for (int round = 0; round < 4; ++round) {
        const RoundRecord r = one_round(m, a);
        const std::uint64_t steps = reference_round(b);
        ASSERT_TRUE(a == b) << "alpha " << alpha << " seed " << seed << " round " << round;
        EXPECT_EQ(static_cast<std::uint64_t>(r.length()), steps);
      }
    }
  }
}

TEST(SorterTest, FrozenRoundMatchesReplay) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EvolvingState s(30, 0, InitPolicy::uniform_random, seed);
    const std::vector<Rank> sigma(s.sigma().begin(), s.sigma().end());
    const std::int64_t I = s.inversions();
    SorterMachine m(SorterKind::repeated_insertion, s);
    const RoundRecord r = one_round(m, s);
    EXPECT_EQ(r.length(), replay_remaining_steps(sigma, 1, 1));
    EXPECT_EQ(r.F, I);
    EXPECT_EQ(r.length(), I + 29);
  }
}

TEST(SorterTest, RoundIdentityAndDrift) {
  for (int alpha : {0, 1, 2}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      EvolvingState s(40, alpha, InitPolicy::uniform_random, seed);
      SorterMachine m(SorterKind::repeated_insertion, s);
      for (int round = 0; round < 8; ++round) {
        const RoundRecord r = one_round(m, s);
        const RoundCheck c = check_round(r, 40);
        EXPECT_TRUE(c.length_identity);
        EXPECT_TRUE(c.length_bound);
        if (alpha <= 1) EXPECT_TRUE(c.drift_bound);
        EXPECT_EQ(r.I_te, m.current_round().I_ts);
        EXPECT_EQ(r.t_e, m.current_round().t_s);
      }
    }
  }
}

TEST(SorterTest, PartitionDuringRound) {
  EvolvingState s(6, 1, InitPolicy::uniform_random, 3);
  SorterMachine m(SorterKind::repeated_insertion, s);
  for (int k = 0; k < 40; ++k) {
    const Partition p = m.partition();
    ASSERT_FALSE(p.complete());
    int active = 0, semi = 0, unsorted = 0;
    for (Position q = 0; q < 6; ++q) {
      active += p.is_active(q);
      semi += p.is_semi_sorted(q);
      unsorted += p.is_unsorted(q);
      EXPECT_EQ(p.is_active(q) + p.is_semi_sorted(q) + p.is_unsorted(q), 1);
    }
    EXPECT_EQ(active, 1);
    EXPECT_EQ(semi, p.i);
    EXPECT_EQ(unsorted, 6 - p.i - 1);
    m.advance(s);
  }
  const Partition done{6, 6, 6};
  EXPECT_TRUE(done.complete());
  EXPECT_TRUE(done.is_semi_sorted(0));
  EXPECT_FALSE(done.is_active(6));
}

TEST(SorterTest, QuicksortPreludeSortsFrozenInput) {
  for (int n : {2, 3, 17, 100}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      EvolvingState s(n, 0, InitPolicy::uniform_random, seed);
      SorterMachine m(SorterKind::quick_then_insertion, s);
      EXPECT_EQ(m.phase(), Phase::quicksort_prelude);
      std::uint64_t steps = 0;
      while (m.quicksort_prelude_advance(s) != StepOutcome::prelude_completed) ++steps;
      ++steps;
      EXPECT_EQ(s.inversions(), 0);
      EXPECT_EQ(m.phase(), Phase::insertion_rounds);
      EXPECT_EQ(m.prelude_comparisons(), steps);
      EXPECT_GE(steps, static_cast<std::uint64_t>(n - 1));
      EXPECT_LE(steps, static_cast<std::uint64_t>(n) * (n - 1) / 2);
      EXPECT_THROW(m.quicksort_prelude_advance(s), ContractViolation);
      // The insertion round that follows has nothing to fix.
      const RoundRecord r = one_round(m, s);
      EXPECT_EQ(r.F, 0);
      EXPECT_EQ(r.length(), n - 1);
    }
  }
}

TEST(SorterTest, RepeatedQuicksortPasses) {
  EvolvingState s(50, 1, InitPolicy::uniform_random, 5);
  SorterMachine m(SorterKind::repeated_quicksort, s);
  RunBudget b;
  b.rounds = 3;
  const RunResult r = run_rounds(m, s, b);
  EXPECT_EQ(m.passes_completed(), 3u);
  ASSERT_EQ(r.rounds.size(), 3u);
  for (const auto& round : r.rounds) {
    EXPECT_FALSE(round.insertion);
    EXPECT_TRUE(round.complete);
  }
  EXPECT_THROW(freeze(s, m), ContractViolation);
}

TEST(SorterTest, PivotStreamIsSeeded) {
  EvolvingState a(64, 1, InitPolicy::uniform_random, 12);
  EvolvingState b = a;
  SorterMachine ma(SorterKind::quick_then_insertion, a);
  SorterMachine mb(SorterKind::quick_then_insertion, b);
  for (int k = 0; k < 2000; ++k) {
    ma.advance(a);
    mb.advance(b);
  }
  EXPECT_TRUE(a == b);
  EvolvingState c(64, 1, InitPolicy::uniform_random, 12);
  SorterMachine mc(SorterKind::quick_then_insertion, c, 1234);
  for (int k = 0; k < 2000; ++k) mc.advance(c);
  EXPECT_FALSE(a == c);
}

TEST(SorterTest, RunRoundsBudgetsAndSeries) {
  EvolvingState s(32, 1, InitPolicy::uniform_random, 8);
  SorterMachine m(SorterKind::repeated_insertion, s);
  EXPECT_THROW(run_rounds(m, s, RunBudget{}), std::invalid_argument);

  RunBudget b;
  b.steps = 5000;
  b.sample_every = 7;
  std::vector<std::uint64_t> good;
  const RunResult r = run_rounds(m, s, b, &good);
  EXPECT_EQ(r.steps, 5000u);
  EXPECT_EQ(s.clock(), 5000u);
  ASSERT_FALSE(r.series.empty());
  for (std::size_t k = 0; k < r.series.size(); ++k) {
    EXPECT_EQ(r.series[k].t % 7, 0u);
    if (k > 0) EXPECT_LT(r.series[k - 1].t, r.series[k].t);
  }
  ASSERT_FALSE(r.rounds.empty());
  EXPECT_FALSE(r.rounds.back().complete);
  EXPECT_EQ(good.size(), r.rounds.size() - 1);
  std::uint64_t total = 0;
  for (auto g : good) total += g;
  EXPECT_LE(total, r.good_swaps);

  RunBudget rounds_only;
  rounds_only.rounds = 2;
  const RunResult two = run_rounds(m, s, rounds_only);
  EXPECT_EQ(two.rounds.size(), 2u);
}
