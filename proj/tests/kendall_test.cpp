#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "evo/kendall.hpp"
#include "evo/rng.hpp"

using namespace evo;

namespace {

std::vector<std::int32_t> random_permutation(int n, Rng& rng) {
  std::vector<std::int32_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (int k = n - 1; k > 0; --k) std::swap(p[k], p[rng.uniform(k + 1)]);
  return p;
}

}  // namespace

TEST(KendallTest, KnownValues) {
  const std::vector<std::int32_t> id{0, 1, 2, 3};
  const std::vector<std::int32_t> rev{3, 2, 1, 0};
  EXPECT_EQ(count_inversions(id), 0);
  EXPECT_EQ(count_inversions(rev), 6);
  EXPECT_EQ(count_inversions(std::vector<std::int32_t>{2, 0, 1}), 2);
  EXPECT_EQ(count_inversions(std::vector<std::int32_t>{}), 0);
  EXPECT_EQ(kendall_tau(id, rev), 6);
  EXPECT_EQ(kendall_tau(rev, rev), 0);
}

TEST(KendallTest, MatchesBruteForce) {
  Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform(60));
    const auto a = random_permutation(n, rng);
    const auto b = random_permutation(n, rng);
    EXPECT_EQ(kendall_tau(a, b), kendall_tau_brute_force(a, b));
    EXPECT_EQ(kendall_tau(a, b), kendall_tau(b, a));
    std::int64_t pairs = 0;
    for (int x = 0; x < n; ++x) {
      for (int y = x + 1; y < n; ++y) pairs += a[x] > a[y];
    }
    EXPECT_EQ(count_inversions(a), pairs);
  }
}

TEST(KendallTest, RejectsNonPermutations) {
  const std::vector<std::int32_t> ok{1, 0, 2};
  const std::vector<std::int32_t> dup{1, 1, 2};
  const std::vector<std::int32_t> shorter{1, 0};
  EXPECT_TRUE(is_permutation(ok));
  EXPECT_FALSE(is_permutation(dup));
  EXPECT_FALSE(is_permutation(std::vector<std::int32_t>{0, 3, 1}));
  EXPECT_THROW(kendall_tau(ok, dup), std::invalid_argument);
  EXPECT_THROW(kendall_tau(ok, shorter), std::invalid_argument);
  EXPECT_THROW(kendall_tau_brute_force(ok, shorter), std::invalid_argument);
}
