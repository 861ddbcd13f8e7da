#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "evo/frozen.hpp"

namespace evo {

/// Structural situation of a random swap in the frozen-state tree, named by
/// the tree degrees of the two swapped elements before the swap.
enum class SwapCase {
  leaf_leaf,
  deg3_deg3,
  deg3_deg2,
  deg1_deg3,
  deg2_deg2,
  deg1_deg2,
  unsorted_on_path,  // adjacent in the tree with an unsorted or active element
  active_moved,      // the active element's frozen slot moved
  separated,         // neither adjacent nor both leaves
};
std::string_view to_string(SwapCase c);

struct CounterExchange {
  std::uint64_t clock = 0;
  Item lowered = 0;  // got Dec incremented
  Item raised = 0;   // got Inc incremented
  SwapCase kase = SwapCase::separated;
  bool pairing_changed = false;
  bool inc_exchanged = false;
  bool dec_exchanged = false;
  /// A pairing change that is not a transfer of roles between the two swapped
  /// elements nor a pair between them appearing or disappearing.
  bool unexplained = false;
};

/// Per-element Inc/Dec counters and the exchange strategy that keeps every
/// degree-three node's pairing gap covered by its counters.
///
/// On each random swap the lowered element's Dec and the raised element's Inc
/// are incremented. The frozen snapshot is then rebuilt and the pairings
/// before and after are compared: when the leaf role of a pair moved between
/// the two swapped elements their Inc counters are exchanged, when the
/// ancestor role moved their Dec counters are exchanged.
class CounterLedger {
 public:
  explicit CounterLedger(int n) : inc_(n, 0), dec_(n, 0) {}

  /// Zeroes every counter and re-freezes; call at each insertion-round start.
  void reset(const EvolvingState& state, const SorterMachine& machine);

  /// Requires alpha == 1 and a prior `reset` in the same round.
  const CounterExchange& on_random_swap(const EvolvingState& state, const SorterMachine& machine,
                                        const RandomSwap& swap);

  std::int64_t inc(Item x) const { return inc_[x]; }
  std::int64_t dec(Item x) const { return dec_[x]; }
  std::int64_t sum_inc_squares() const;
  std::int64_t sum_dec_squares() const;
  std::span<const std::int64_t> inc_counters() const { return inc_; }
  std::span<const std::int64_t> dec_counters() const { return dec_; }

  /// Frozen snapshot after the latest swap (or reset).
  const FrozenSnapshot& snapshot() const { return snapshot_; }
  const std::vector<CounterExchange>& exchange_log() const { return log_; }
  void clear_log() { log_.clear(); }

 private:
  std::vector<std::int64_t> inc_;
  std::vector<std::int64_t> dec_;
  FrozenSnapshot snapshot_;
  bool synced_ = false;
  std::vector<CounterExchange> log_;
};

/// Direct wrapper with the explicit-ledger calling convention.
inline const CounterExchange& ledger_on_random_swap(CounterLedger& ledger,
                                                    const EvolvingState& state,
                                                    const SorterMachine& machine,
                                                    const RandomSwap& swap) {
  return ledger.on_random_swap(state, machine, swap);
}

struct InvariantCheck {
  std::int64_t checked = 0;
  std::int64_t violations = 0;
  std::string first_violation;
  bool ok() const { return violations == 0; }
};

/// For minima-path elements: Inc(l[M(k)]) + Dec(l[k]) >= sigma(M(k)) - sigma(k).
InvariantCheck check_invariant1(const CounterLedger& ledger, const FrozenSnapshot& snapshot);
/// For degree-three elements: sigma(P(a)) - sigma(a) <= Inc(l[P(a)]) + Dec(l[a]).
InvariantCheck check_invariant2(const CounterLedger& ledger, const FrozenSnapshot& snapshot);

}  // namespace evo
