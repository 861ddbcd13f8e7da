#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "evo/frozen.hpp"
#include "evo/kendall.hpp"

using namespace evo;

namespace {

struct MidRound {
  EvolvingState state;
  SorterMachine machine;
};

MidRound advance_to(int n, std::uint64_t seed, int steps) {
  EvolvingState s(n, 1, InitPolicy::uniform_random, seed);
  SorterMachine m(SorterKind::repeated_insertion, s);
  for (int k = 0; k < steps; ++k) m.advance(s);
  return {std::move(s), std::move(m)};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(FrozenTest, GoldenSnapshot) {
  const std::vector<Rank> sigma{2, 0, 3, 1};
  const std::vector<Item> items{2, 0, 3, 1};
  const FrozenSnapshot s = analyze_frozen_order(sigma, items);
  const auto expected = nlohmann::json::parse(read_file(EVO_GOLDEN_DIR "/snapshot_2031.json"));
  EXPECT_EQ(nlohmann::json::parse(dump_snapshot(s)), expected);
  EXPECT_EQ(minima_width_bound(s), 8);
  EXPECT_EQ(s.item_pairs().size(), 2u);
}

TEST(FrozenTest, RemainingStepsMatchReplay) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (int steps : {0, 1, 17, 200, 1000}) {
      auto [s, m] = advance_to(24, seed, steps);
      const FrozenSnapshot snap = freeze(s, m);
      const std::vector<Rank> sigma(s.sigma().begin(), s.sigma().end());
      EXPECT_EQ(snap.remaining_steps, replay_remaining_steps(sigma, m.i(), m.j()));
      EXPECT_EQ(snap.clock, s.clock());
      // Freezing does not touch the live state.
      EXPECT_EQ(brute_force_inversions(s.sigma()), s.inversions());
      // The frozen order is a permutation of the items.
      std::vector<Item> sorted = snap.hat_items;
      std::sort(sorted.begin(), sorted.end());
      for (int k = 0; k < 24; ++k) EXPECT_EQ(sorted[k], k);
    }
  }
}

TEST(FrozenTest, BadInversionsAreExactlyFrozenInversions) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    for (int steps : {3, 40, 150, 700}) {
      auto [s, m] = advance_to(20, seed, steps);
      const FrozenSnapshot snap = freeze(s, m);
      const BadInversionReport r = classify_bad_inversions(s, m, snap);
      EXPECT_EQ(r.B(), count_inversions(snap.hat_sigma));

      std::set<std::pair<Item, Item>> reported;
      for (const auto& list : {r.stuck, r.blocked}) {
        for (const auto& p : list) {
          const Item a = s.item_at(p.a), b = s.item_at(p.b);
          EXPECT_TRUE(reported.insert({std::min(a, b), std::max(a, b)}).second);
        }
      }
      std::set<std::pair<Item, Item>> inverted;
      for (Item a = 0; a < 20; ++a) {
        for (Item b = a + 1; b < 20; ++b) {
          const bool a_first = snap.frozen_position[a] < snap.frozen_position[b];
          const bool a_smaller = s.true_rank()[a] < s.true_rank()[b];
          if (a_first != a_smaller) inverted.insert({a, b});
        }
      }
      EXPECT_EQ(reported, inverted);
      EXPECT_LE(r.B(), minima_width_bound(snap));
    }
  }
}

TEST(FrozenTest, StaleSnapshotThrows) {
  auto [s, m] = advance_to(16, 4, 10);
  const FrozenSnapshot snap = freeze(s, m);
  m.advance(s);
  EXPECT_THROW(classify_bad_inversions(s, m, snap), ContractViolation);
}

TEST(FrozenTest, MinimaPathAndPairing) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto [s, m] = advance_to(30, seed, 300);
    const FrozenSnapshot snap = freeze(s, m);
    const auto& t = snap.tree;
    // Minima path: root then right children, ending at the n sentinel.
    ASSERT_FALSE(snap.minima_path.empty());
    EXPECT_EQ(snap.minima_path.front(), 0);
    EXPECT_EQ(snap.minima_path.back(), 31);
    for (Position k = 0; k < 30; ++k) {
      const int v = FrozenSnapshot::node_of(k);
      Position expect = k;
      if (snap.on_minima_path[v] && t.left[v] >= 0) {
        Rank best = -1;
        for (int u = snap.spans.first[v]; u < v; ++u) {
          if (snap.value(u) > best) {
            best = snap.value(u);
            expect = FrozenSnapshot::position_of_node(u);
          }
        }
      }
      EXPECT_EQ(snap.M[k], expect);
    }
    // Pairing: symmetric, every two-child node paired with a leaf below it.
    int two_child = 0;
    for (int v = 0; v < t.size(); ++v) {
      if (snap.pair[v] >= 0) EXPECT_EQ(snap.pair[snap.pair[v]], v);
      if (t.children(v) == 2) {
        ++two_child;
        const int leaf = snap.pair[v];
        ASSERT_GE(leaf, 0);
        EXPECT_TRUE(t.is_leaf(leaf));
        EXPECT_TRUE(snap.spans.first[v] <= leaf && leaf <= snap.spans.last[v]);
        EXPECT_GT(snap.value(leaf), snap.value(v));
      }
    }
    EXPECT_EQ(static_cast<int>(snap.item_pairs().size()), two_child);
    EXPECT_EQ(snap.pair[0], 31);
  }
}

TEST(FrozenTest, Lemma6OnRandomStates) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    EvolvingState s(24, 1, InitPolicy::uniform_random, seed);
    SorterMachine m(SorterKind::repeated_insertion, s);
    for (int k = 0; k < 1500; ++k) {
      m.advance(s);
      if (k % 13 == 0) {
        const FrozenSnapshot snap = freeze(s, m);
        EXPECT_TRUE(check_lemma6(s, m, snap, m.current_round()));
      }
    }
  }
}
