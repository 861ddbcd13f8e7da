#include "evo/frozen.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "evo/ledger.hpp"

namespace evo {

std::vector<std::pair<Item, Item>> FrozenSnapshot::item_pairs() const {
  std::vector<std::pair<Item, Item>> out;
  for (int v = 1; v <= n; ++v) {
    if (tree.children(v) == 2 && pair[v] >= 0) out.emplace_back(item_of_node(v), item_of_node(pair[v]));
  }
  return out;
}

FrozenSnapshot analyze_frozen_order(std::span<const Rank> hat_sigma,
                                    std::span<const Item> hat_items) {
  const int n = static_cast<int>(hat_sigma.size());
  FrozenSnapshot s;
  s.n = n;
  s.hat_sigma.assign(hat_sigma.begin(), hat_sigma.end());
  s.hat_items.assign(hat_items.begin(), hat_items.end());
  s.frozen_position.assign(n, -1);
  for (Position k = 0; k < n; ++k) s.frozen_position[s.hat_items[k]] = k;

  std::vector<std::int32_t> values;
  values.reserve(n + 2);
  values.push_back(-1);
  values.insert(values.end(), s.hat_sigma.begin(), s.hat_sigma.end());
  values.push_back(n);
  s.tree = build_cartesian_tree(values);
  s.spans = subtree_spans(s.tree);
  const auto& t = s.tree;
  const int m = t.size();

  s.on_minima_path.assign(m, false);
  for (int v = t.root; v >= 0; v = t.right[v]) {
    s.minima_path.push_back(v);
    s.on_minima_path[v] = true;
  }

  // Bottom-up order: reverse of a pre-order walk.
  std::vector<std::int32_t> order;
  order.reserve(m);
  std::vector<std::int32_t> stack{t.root};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    if (t.left[v] >= 0) stack.push_back(t.left[v]);
    if (t.right[v] >= 0) stack.push_back(t.right[v]);
  }

  std::vector<std::int32_t> max_node(m, -1);
  std::vector<std::int32_t> max_leaf(m, -1);
  s.pair.assign(m, -1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    const int l = t.left[v];
    const int r = t.right[v];
    max_node[v] = v;
    for (int c : {l, r}) {
      if (c >= 0 && t.values[max_node[c]] > t.values[max_node[v]]) max_node[v] = max_node[c];
    }
    if (l < 0 && r < 0) {
      max_leaf[v] = v;
    } else if (l >= 0 && r >= 0) {
      // The larger maximum leaf stays available for an ancestor.
      const bool left_smaller = t.values[max_leaf[l]] < t.values[max_leaf[r]];
      const int smaller = left_smaller ? max_leaf[l] : max_leaf[r];
      s.pair[v] = smaller;
      s.pair[smaller] = v;
      max_leaf[v] = left_smaller ? max_leaf[r] : max_leaf[l];
    } else {
      max_leaf[v] = max_leaf[l >= 0 ? l : r];
    }
  }
  // The root sentinel takes the leaf that survived to the top (sentinel n).
  s.pair[t.root] = max_leaf[t.root];
  s.pair[max_leaf[t.root]] = t.root;

  s.M.resize(n);
  for (Position k = 0; k < n; ++k) {
    const int v = FrozenSnapshot::node_of(k);
    s.M[k] = k;
    if (s.on_minima_path[v] && t.left[v] >= 0) {
      s.M[k] = FrozenSnapshot::position_of_node(max_node[t.left[v]]);
    }
  }
  return s;
}

FrozenSnapshot freeze(const EvolvingState& state, const SorterMachine& machine) {
  if (machine.phase() != Phase::insertion_rounds ||
      machine.kind() == SorterKind::repeated_quicksort) {
    throw ContractViolation("freeze: no insertion round in progress");
  }
  EvolvingState sim = state.frozen_copy();
  SorterMachine m = machine;
  std::int64_t steps = 0;
  if (!m.at_round_boundary()) {
    while (true) {
      ++steps;
      if (m.advance(sim) == StepOutcome::round_completed) break;
    }
  }
  FrozenSnapshot s = analyze_frozen_order(sim.sigma(), sim.maintained());
  s.clock = state.clock();
  s.revision = state.revision();
  s.remaining_steps = steps;
  return s;
}

std::int64_t replay_remaining_steps(std::vector<Rank> sigma, Position i, Position j) {
  const auto n = static_cast<Position>(sigma.size());
  std::int64_t steps = 0;
  while (i < n) {
    ++steps;
    if (j > 0 && sigma[j] < sigma[j - 1]) {
      std::swap(sigma[j], sigma[j - 1]);
      --j;
    } else {
      ++i;
      j = i;
    }
  }
  return steps;
}

std::int64_t minima_width_bound(const FrozenSnapshot& s) {
  std::int64_t total = 0;
  for (Position k = 0; k < s.n; ++k) {
    const std::int64_t w = s.hat_sigma[s.M[k]] - s.hat_sigma[k];
    total += w * w;
  }
  return total;
}

Lemma6Result check_lemma6(const EvolvingState& state, const FrozenSnapshot& snapshot,
                          const RoundRecord& round_start, std::int64_t B) {
  Lemma6Result r;
  r.S = snapshot.remaining_steps;
  const auto elapsed = static_cast<std::int64_t>(state.clock() - round_start.t_s);
  r.rhs = round_start.I_ts - 2 * elapsed - B;
  r.holds = r.S >= r.rhs;
  return r;
}

bool check_lemma6(const EvolvingState& state, const SorterMachine& machine,
                  const FrozenSnapshot& snapshot, const RoundRecord& round_start) {
  const auto report = classify_bad_inversions(state, machine, snapshot);
  return check_lemma6(state, snapshot, round_start, report.B()).holds;
}

bool check_lemma7(const CounterLedger& ledger, const BadInversionReport& report) {
  const std::int64_t kappa = std::max(ledger.sum_inc_squares(), ledger.sum_dec_squares());
  if (kappa == 0) return report.B() == 0;
  return report.B() <= 4 * kappa;
}

TriangleResult check_triangle(const CounterLedger& ledger, const FrozenSnapshot& s) {
  TriangleResult r;
  for (int v : s.minima_path) {
    if (s.is_sentinel(v)) continue;
    const Position k = FrozenSnapshot::position_of_node(v);
    const double term =
        static_cast<double>(ledger.inc(s.hat_items[s.M[k]]) + ledger.dec(s.hat_items[k]));
    r.lhs += term * term;
  }
  const double a = std::sqrt(static_cast<double>(ledger.sum_inc_squares()));
  const double b = std::sqrt(static_cast<double>(ledger.sum_dec_squares()));
  r.rhs = (a + b) * (a + b);
  r.holds = r.lhs <= r.rhs * (1 + 1e-12) + 1e-9;
  return r;
}

std::string dump_snapshot(const FrozenSnapshot& s, const CounterLedger* ledger) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["n"] = s.n;
  j["clock"] = s.clock;
  j["remaining_steps"] = s.remaining_steps;
  j["hat_sigma"] = s.hat_sigma;
  j["hat_items"] = s.hat_items;
  // Indexed by frozen position + 1, i.e. entry 0 is the -1 sentinel.
  ordered_json parent = ordered_json::array();
  for (int v = 0; v < s.tree.size(); ++v) {
    if (s.tree.parent[v] < 0) {
      parent.push_back(nullptr);
    } else {
      parent.push_back(FrozenSnapshot::position_of_node(s.tree.parent[v]));
    }
  }
  j["parent"] = parent;
  ordered_json path = ordered_json::array();
  for (int v : s.minima_path) path.push_back(FrozenSnapshot::position_of_node(v));
  j["minima_path"] = path;
  j["M"] = s.M;
  ordered_json pairs = ordered_json::array();
  for (int v = 0; v < s.tree.size(); ++v) {
    const int p = s.pair[v];
    if (p >= 0 && s.tree.values[v] < s.tree.values[p]) {
      pairs.push_back({FrozenSnapshot::position_of_node(v), FrozenSnapshot::position_of_node(p)});
    }
  }
  j["pairs"] = pairs;
  if (ledger) {
    j["inc"] = ledger->inc_counters();
    j["dec"] = ledger->dec_counters();
  }
  return j.dump();
}

}  // namespace evo
