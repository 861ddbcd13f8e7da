#include <limits>

#include "evo/frozen.hpp"

namespace evo {

BadInversionReport classify_bad_inversions(const EvolvingState& state,
                                           const SorterMachine& machine,
                                           const FrozenSnapshot& snapshot) {
  return classify_bad_inversions(state, machine.partition(), snapshot);
}

BadInversionReport classify_bad_inversions(const EvolvingState& state, const Partition& part,
                                           const FrozenSnapshot& snapshot) {
  if (snapshot.revision != state.revision() || snapshot.clock != state.clock()) {
    throw ContractViolation("classify_bad_inversions: snapshot is stale");
  }
  const int n = state.n();
  const auto sigma = state.sigma();

  // Minima-path node owning each node: itself if on the path, otherwise the
  // path node whose left subtree contains it (the nearest path node to the
  // right in in-order).
  const int m = snapshot.tree.size();
  std::vector<std::int32_t> owner(m, -1);
  for (int v = m - 1, current = -1; v >= 0; --v) {
    if (snapshot.on_minima_path[v]) current = v;
    owner[v] = current;
  }
  const auto node_at = [&](Position p) { return snapshot.node_of_item(state.item_at(p)); };

  BadInversionReport r;
  r.revision = state.revision();
  const auto blame_ok = [&](Position a, Position blamed) {
    const int bv = node_at(blamed);
    return snapshot.on_minima_path[bv] && snapshot.in_left_subtree(node_at(a), bv);
  };

  constexpr Rank kNone = std::numeric_limits<Rank>::max();
  for (Position a = 0; a < n; ++a) {
    const bool a_eligible = !part.is_unsorted(a);
    Rank min_between = kNone;  // over all c in (a, b)
    Position argmin_between = -1;
    Rank min_semi_between = kNone;  // over semi-sorted c in (a, b)
    for (Position b = a + 1; b < n; ++b) {
      if (sigma[a] > sigma[b]) {
        if (part.is_semi_sorted(b)) {
          r.stuck.push_back({a, b});
          const int oa = owner[node_at(a)];
          Position blamed = argmin_between;
          if (oa == owner[node_at(b)] && !snapshot.is_sentinel(oa)) {
            blamed = state.position_of(snapshot.item_of_node(oa));
          }
          r.stuck_blame.push_back(blamed);
          if (blamed < 0 || !blame_ok(a, blamed)) ++r.blame_anomalies;
        } else if (a_eligible && min_semi_between < sigma[b]) {
          r.blocked.push_back({a, b});
          r.blocked_blame.push_back(argmin_between);
          if (!blame_ok(a, argmin_between)) ++r.blame_anomalies;
        }
      }
      if (sigma[b] < min_between) {
        min_between = sigma[b];
        argmin_between = b;
      }
      if (part.is_semi_sorted(b) && sigma[b] < min_semi_between) min_semi_between = sigma[b];
    }
  }
  return r;
}

}  // namespace evo
