#include "evo/ledger.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace evo {

std::string_view to_string(SwapCase c) {
  switch (c) {
    case SwapCase::leaf_leaf:
      return "leaf_leaf";
    case SwapCase::deg3_deg3:
      return "deg3_deg3";
    case SwapCase::deg3_deg2:
      return "deg3_deg2";
    case SwapCase::deg1_deg3:
      return "deg1_deg3";
    case SwapCase::deg2_deg2:
      return "deg2_deg2";
    case SwapCase::deg1_deg2:
      return "deg1_deg2";
    case SwapCase::unsorted_on_path:
      return "unsorted_on_path";
    case SwapCase::active_moved:
      return "active_moved";
    case SwapCase::separated:
      return "separated";
  }
  return "?";
}

namespace {

using PairSet = std::set<std::pair<Item, Item>>;  // (ancestor, leaf)

PairSet pair_set(const FrozenSnapshot& s) {
  const auto v = s.item_pairs();
  return PairSet(v.begin(), v.end());
}

SwapCase classify_swap(const FrozenSnapshot& before, const FrozenSnapshot& after,
                       const Partition& part, const EvolvingState& state, Item a, Item b) {
  const auto& t = before.tree;
  const int va = before.node_of_item(a);
  const int vb = before.node_of_item(b);
  const Item active = part.complete() ? -1 : state.item_at(part.j);
  if ((a == active || b == active) &&
      before.frozen_position[active] != after.frozen_position[active]) {
    return SwapCase::active_moved;
  }
  if (t.is_leaf(va) && t.is_leaf(vb)) return SwapCase::leaf_leaf;
  if (!t.adjacent(va, vb)) return SwapCase::separated;
  const auto in_flux = [&](Item x) {
    const Position p = state.position_of(x);
    return part.is_active(p) || part.is_unsorted(p);
  };
  if (in_flux(a) || in_flux(b)) return SwapCase::unsorted_on_path;
  const int lo = std::min(t.degree(va), t.degree(vb));
  const int hi = std::max(t.degree(va), t.degree(vb));
  if (lo == 3) return SwapCase::deg3_deg3;
  if (lo == 2 && hi == 3) return SwapCase::deg3_deg2;
  if (lo == 1 && hi == 3) return SwapCase::deg1_deg3;
  if (lo == 2) return SwapCase::deg2_deg2;
  return SwapCase::deg1_deg2;
}

}  // namespace

void CounterLedger::reset(const EvolvingState& state, const SorterMachine& machine) {
  std::fill(inc_.begin(), inc_.end(), 0);
  std::fill(dec_.begin(), dec_.end(), 0);
  snapshot_ = freeze(state, machine);
  synced_ = true;
}

std::int64_t CounterLedger::sum_inc_squares() const {
  std::int64_t s = 0;
  for (auto v : inc_) s += v * v;
  return s;
}

std::int64_t CounterLedger::sum_dec_squares() const {
  std::int64_t s = 0;
  for (auto v : dec_) s += v * v;
  return s;
}

const CounterExchange& CounterLedger::on_random_swap(const EvolvingState& state,
                                                     const SorterMachine& machine,
                                                     const RandomSwap& swap) {
  if (state.alpha() != 1) throw ContractViolation("CounterLedger: instrumented mode needs alpha == 1");
  if (!synced_) throw ContractViolation("CounterLedger: reset() must start the round");

  const Item a = swap.lowered;
  const Item b = swap.raised;
  ++dec_[a];
  ++inc_[b];

  FrozenSnapshot after = freeze(state, machine);
  const PairSet old_pairs = pair_set(snapshot_);
  const PairSet new_pairs = pair_set(after);

  CounterExchange ex;
  ex.clock = state.clock();
  ex.lowered = a;
  ex.raised = b;
  ex.kase = classify_swap(snapshot_, after, machine.partition(), state, a, b);
  ex.pairing_changed = old_pairs != new_pairs;

  if (ex.pairing_changed) {
    std::map<Item, Item> old_leaf, new_leaf, old_anc, new_anc;
    for (auto [x, y] : old_pairs) {
      old_leaf[x] = y;
      old_anc[y] = x;
    }
    for (auto [x, y] : new_pairs) {
      new_leaf[x] = y;
      new_anc[y] = x;
    }
    const auto is_ab = [&](Item u, Item v) { return (u == a && v == b) || (u == b && v == a); };
    for (auto [x, y] : old_leaf) {
      auto it = new_leaf.find(x);
      if (it != new_leaf.end() && is_ab(y, it->second)) ex.inc_exchanged = true;
    }
    for (auto [y, x] : old_anc) {
      auto it = new_anc.find(y);
      if (it != new_anc.end() && is_ab(x, it->second)) ex.dec_exchanged = true;
    }

    // Everything left after relabelling must be a pair between a and b.
    const auto swap_ab = [&](Item u) { return u == a ? b : (u == b ? a : u); };
    PairSet relabelled;
    for (auto [x, y] : old_pairs) {
      relabelled.emplace(ex.dec_exchanged ? swap_ab(x) : x, ex.inc_exchanged ? swap_ab(y) : y);
    }
    std::vector<std::pair<Item, Item>> diff;
    std::set_symmetric_difference(relabelled.begin(), relabelled.end(), new_pairs.begin(),
                                  new_pairs.end(), std::back_inserter(diff));
    ex.unexplained = std::any_of(diff.begin(), diff.end(),
                                 [&](const auto& p) { return !is_ab(p.first, p.second); });
  }
  if (ex.inc_exchanged) std::swap(inc_[a], inc_[b]);
  if (ex.dec_exchanged) std::swap(dec_[a], dec_[b]);

  snapshot_ = std::move(after);
  log_.push_back(ex);
  return log_.back();
}

InvariantCheck check_invariant1(const CounterLedger& ledger, const FrozenSnapshot& s) {
  InvariantCheck c;
  for (int v : s.minima_path) {
    if (s.is_sentinel(v) || s.tree.left[v] < 0) continue;
    const Position k = FrozenSnapshot::position_of_node(v);
    const std::int64_t need = s.hat_sigma[s.M[k]] - s.hat_sigma[k];
    const std::int64_t have = ledger.inc(s.hat_items[s.M[k]]) + ledger.dec(s.hat_items[k]);
    ++c.checked;
    if (have < need) {
      if (c.violations++ == 0) {
        std::ostringstream msg;
        msg << "invariant 1 at frozen position " << k << ": Inc+Dec=" << have
            << " < gap=" << need;
        c.first_violation = msg.str();
      }
    }
  }
  return c;
}

InvariantCheck check_invariant2(const CounterLedger& ledger, const FrozenSnapshot& s) {
  InvariantCheck c;
  for (int v = 1; v <= s.n; ++v) {
    if (s.tree.children(v) != 2) continue;
    ++c.checked;
    const int p = s.pair[v];
    std::int64_t need = 0;
    std::int64_t have = -1;
    if (p >= 0 && !s.is_sentinel(p)) {
      need = s.value(p) - s.value(v);
      have = ledger.inc(s.item_of_node(p)) + ledger.dec(s.item_of_node(v));
    }
    if (have < need) {
      if (c.violations++ == 0) {
        std::ostringstream msg;
        msg << "invariant 2 at frozen position " << FrozenSnapshot::position_of_node(v)
            << " paired with " << FrozenSnapshot::position_of_node(p) << ": Inc+Dec=" << have
            << " < gap=" << need;
        c.first_violation = msg.str();
      }
    }
  }
  return c;
}

}  // namespace evo
