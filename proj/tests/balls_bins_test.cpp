#include <gtest/gtest.h>

#include "evo/balls_bins.hpp"

using namespace evo;

TEST(BallsBinsTest, BallCount) {
  EXPECT_EQ(ball_count(10, 3.0), 30);
  EXPECT_EQ(ball_count(10, 0.25), 3);
  EXPECT_EQ(ball_count(3, 0.1 * 10), 3);
  EXPECT_THROW(ball_count(0, 1.0), std::invalid_argument);
}

TEST(BallsBinsTest, DegenerateBinCounts) {
  Rng rng(1);
  // One bin: every ball lands there.
  EXPECT_EQ(balls_and_bins_once(1, 2.0, ForbiddenBinPolicy::none, rng), 4);
  // Two bins, bin 0 stays empty and so stays forbidden: 4 balls in bin 1.
  EXPECT_EQ(balls_and_bins_once(2, 2.0, ForbiddenBinPolicy::adversarial_lowest, rng), 16);
}

TEST(BallsBinsTest, SumOfSquaresIsAtLeastEvenSpread) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::int64_t s = balls_and_bins_once(100, 3.0, ForbiddenBinPolicy::adversarial_lowest, rng);
    // 300 balls in 99 usable bins: convexity bound.
    EXPECT_GE(s, 300ll * 300 / 99);
    EXPECT_LE(s, 300ll * 300);
  }
}

TEST(BallsBinsTest, LowestForbiddenIsUniformOnRemainingBins) {
  // The lowest bin is never filled, so it stays forbidden forever and the
  // process is uniform on the other n - 1 bins, draw for draw.
  const int n = 500;
  const double c = 3.0;
  const auto adv = balls_and_bins_trial(n, c, 200, ForbiddenBinPolicy::adversarial_lowest, 9,
                                        Execution::serial);
  const double c_shrunk = c * n / (n - 1);
  const auto none = balls_and_bins_trial(n - 1, c_shrunk, 200, ForbiddenBinPolicy::none, 9,
                                         Execution::serial);
  ASSERT_EQ(adv.balls, none.balls);
  EXPECT_EQ(adv.sums, none.sums);
  EXPECT_EQ(adv.balls, 1500);
  EXPECT_DOUBLE_EQ(adv.threshold, 3.0 * 9.0 * 500);
  EXPECT_EQ(adv.exceeding, 0);
}

TEST(BallsBinsTest, SerialMatchesParallel) {
  for (auto policy : {ForbiddenBinPolicy::none, ForbiddenBinPolicy::adversarial_lowest}) {
    const auto a = balls_and_bins_trial(300, 2.0, 64, policy, 5, Execution::serial);
    const auto b = balls_and_bins_trial(300, 2.0, 64, policy, 5, Execution::parallel);
    EXPECT_EQ(a.sums, b.sums);
    EXPECT_EQ(a.max_sum, b.max_sum);
    EXPECT_EQ(a.exceeding, b.exceeding);
  }
}

TEST(BallsBinsTest, PolicyNames) {
  for (auto p : {ForbiddenBinPolicy::none, ForbiddenBinPolicy::adversarial_lowest}) {
    EXPECT_EQ(parse_forbidden_bin_policy(to_string(p)), p);
  }
  EXPECT_THROW(parse_forbidden_bin_policy("random"), std::invalid_argument);
}
