#include "evo/cartesian_tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace evo {

CartesianTree build_cartesian_tree(std::span<const std::int32_t> values) {
  {
    std::vector<std::int32_t> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("build_cartesian_tree: values must be distinct");
    }
  }
  const int m = static_cast<int>(values.size());
  CartesianTree t;
  t.values.assign(values.begin(), values.end());
  t.parent.assign(m, -1);
  t.left.assign(m, -1);
  t.right.assign(m, -1);

  // Right spine of the tree built so far, bottom on top.
  std::vector<std::int32_t> spine;
  spine.reserve(m);
  for (int v = 0; v < m; ++v) {
    std::int32_t last_popped = -1;
    while (!spine.empty() && t.values[spine.back()] > t.values[v]) {
      last_popped = spine.back();
      spine.pop_back();
    }
    if (last_popped >= 0) {
      t.left[v] = last_popped;
      t.parent[last_popped] = v;
    }
    if (!spine.empty()) {
      t.right[spine.back()] = v;
      t.parent[v] = spine.back();
    }
    spine.push_back(v);
  }
  t.root = spine.empty() ? -1 : spine.front();
  return t;
}

SubtreeSpans subtree_spans(const CartesianTree& tree) {
  const int m = tree.size();
  SubtreeSpans s;
  s.first.resize(m);
  s.last.resize(m);
  // Post-order via explicit stack; children have larger depth than parents.
  std::vector<std::int32_t> order;
  order.reserve(m);
  std::vector<std::int32_t> stack;
  if (tree.root >= 0) stack.push_back(tree.root);
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    if (tree.left[v] >= 0) stack.push_back(tree.left[v]);
    if (tree.right[v] >= 0) stack.push_back(tree.right[v]);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    s.first[v] = tree.left[v] >= 0 ? s.first[tree.left[v]] : v;
    s.last[v] = tree.right[v] >= 0 ? s.last[tree.right[v]] : v;
  }
  return s;
}

}  // namespace evo
