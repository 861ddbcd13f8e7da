#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace evo {

/// Min-rooted Cartesian tree over a sequence of distinct values. Node ids are
/// indices into the sequence; -1 means "none".
struct CartesianTree {
  std::vector<std::int32_t> values;
  std::vector<std::int32_t> parent;
  std::vector<std::int32_t> left;
  std::vector<std::int32_t> right;
  std::int32_t root = -1;

  int size() const { return static_cast<int>(values.size()); }
  int children(int v) const { return (left[v] >= 0) + (right[v] >= 0); }
  /// Number of tree neighbours (parent plus children).
  int degree(int v) const { return children(v) + (parent[v] >= 0); }
  bool is_leaf(int v) const { return children(v) == 0; }
  bool adjacent(int u, int v) const { return parent[u] == v || parent[v] == u; }
};

/// O(n) stack construction. Throws std::invalid_argument on duplicate values.
CartesianTree build_cartesian_tree(std::span<const std::int32_t> values);

/// In-order interval [first, last] of node ids covered by each subtree.
struct SubtreeSpans {
  std::vector<std::int32_t> first;
  std::vector<std::int32_t> last;
};
SubtreeSpans subtree_spans(const CartesianTree& tree);

}  // namespace evo
