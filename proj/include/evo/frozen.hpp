#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evo/cartesian_tree.hpp"
#include "evo/evolving_state.hpp"
#include "evo/sorter.hpp"

namespace evo {

class CounterLedger;

/// The state the current insertion round would end in if the true order
/// stopped changing now, plus the Cartesian-tree structure built on it.
///
/// Tree nodes are frozen positions shifted by one: node 0 is the sentinel
/// with value -1 (position -1) and node n+1 the sentinel with value n
/// (position n). `hat_sigma[k]` is the rank of the item that ends at frozen
/// position k.
struct FrozenSnapshot {
  std::uint64_t clock = 0;
  std::uint64_t revision = 0;
  int n = 0;
  std::vector<Rank> hat_sigma;
  std::vector<Item> hat_items;
  std::vector<Position> frozen_position;  // item -> frozen position
  std::int64_t remaining_steps = 0;       // S_t

  CartesianTree tree;
  SubtreeSpans spans;
  std::vector<std::int32_t> minima_path;  // nodes, root to rightmost leaf
  std::vector<bool> on_minima_path;       // per node
  /// Frozen position of the largest element in the left subtree of a
  /// minima-path node; M[k] == k elsewhere.
  std::vector<Position> M;
  /// Node paired with each node (degree-three nodes with a descendant leaf,
  /// the two sentinels with each other); -1 for unpaired nodes.
  std::vector<std::int32_t> pair;

  static int node_of(Position k) { return k + 1; }
  static Position position_of_node(int node) { return node - 1; }
  bool is_sentinel(int node) const { return node == 0 || node == n + 1; }
  Item item_of_node(int node) const { return is_sentinel(node) ? -1 : hat_items[node - 1]; }
  int node_of_item(Item x) const { return frozen_position[x] + 1; }
  Rank value(int node) const { return tree.values[node]; }
  bool in_left_subtree(int node, int of) const {
    return spans.first[of] <= node && node < of;
  }
  /// Items with two children in the tree, mapped to their paired leaf item.
  /// Sentinels are excluded.
  std::vector<std::pair<Item, Item>> item_pairs() const;
};

/// Simulates the rest of the current insertion round with random swaps
/// disabled. Throws ContractViolation during a quicksort phase.
FrozenSnapshot freeze(const EvolvingState& state, const SorterMachine& machine);

/// Builds tree, minima path, M and the pairing for a frozen order. Exposed
/// for tests that construct frozen orders directly.
FrozenSnapshot analyze_frozen_order(std::span<const Rank> hat_sigma,
                                    std::span<const Item> hat_items);

/// Independent replay of the rest of an insertion round on a raw rank
/// sequence; returns the number of guard evaluations left (S_t).
std::int64_t replay_remaining_steps(std::vector<Rank> sigma, Position i, Position j);

struct PositionPair {
  Position a = 0;
  Position b = 0;
  friend bool operator==(const PositionPair&, const PositionPair&) = default;
};

struct BadInversionReport {
  std::uint64_t revision = 0;
  std::vector<PositionPair> stuck;
  std::vector<PositionPair> blocked;
  /// Blamed position (in the maintained list) for stuck then blocked pairs,
  /// in the same order.
  std::vector<Position> stuck_blame;
  std::vector<Position> blocked_blame;
  /// Pairs whose blamed element is off the minima path or whose left element
  /// is not in the blamed node's left subtree.
  std::int64_t blame_anomalies = 0;

  std::int64_t B() const { return static_cast<std::int64_t>(stuck.size() + blocked.size()); }
};

/// Exact O(n^2) enumeration of stuck and blocked inversions. Throws
/// ContractViolation when the snapshot is stale.
BadInversionReport classify_bad_inversions(const EvolvingState& state,
                                           const SorterMachine& machine,
                                           const FrozenSnapshot& snapshot);
BadInversionReport classify_bad_inversions(const EvolvingState& state, const Partition& part,
                                           const FrozenSnapshot& snapshot);

/// Sum over positions of (sigma(M(k)) - sigma(k))^2; an upper bound on B_t.
std::int64_t minima_width_bound(const FrozenSnapshot& snapshot);

struct Lemma6Result {
  bool holds = true;
  std::int64_t S = 0;
  std::int64_t rhs = 0;  // I_ts - 2 (t - t_s) - B
};
Lemma6Result check_lemma6(const EvolvingState& state, const FrozenSnapshot& snapshot,
                          const RoundRecord& round_start, std::int64_t B);
bool check_lemma6(const EvolvingState& state, const SorterMachine& machine,
                  const FrozenSnapshot& snapshot, const RoundRecord& round_start);

/// B <= 4 max(sum Inc^2, sum Dec^2), and B == 0 when both sums vanish.
bool check_lemma7(const CounterLedger& ledger, const BadInversionReport& report);

/// sum over minima-path k of (Inc(M(k)) + Dec(k))^2 versus
/// (sqrt(sum Inc^2) + sqrt(sum Dec^2))^2.
struct TriangleResult {
  bool holds = true;
  double lhs = 0;
  double rhs = 0;
};
TriangleResult check_triangle(const CounterLedger& ledger, const FrozenSnapshot& snapshot);

/// JSON dump: parent array (by frozen position, null for the root), minima
/// path, M, pairs, and counters when a ledger is given.
std::string dump_snapshot(const FrozenSnapshot& snapshot, const CounterLedger* ledger = nullptr);

}  // namespace evo
