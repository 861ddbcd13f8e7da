#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "evo/frozen.hpp"
#include "evo/ledger.hpp"
#include "evo/series.hpp"
#include "evo/sorter.hpp"

namespace evo {

/// Violation counters gathered by an instrumented run. Every `*_checks`
/// field counts evaluations, every `*_violations` field failures.
struct InstrumentStats {
  std::uint64_t steps = 0;
  std::uint64_t rounds = 0;
  std::uint64_t round_identity_violations = 0;  // t_e - t_s != F + n - 1
  std::uint64_t round_length_violations = 0;
  std::uint64_t drift_violations = 0;
  std::uint64_t swaps = 0;
  std::uint64_t invariant1_checks = 0;
  std::uint64_t invariant1_violations = 0;
  std::uint64_t invariant2_checks = 0;
  std::uint64_t invariant2_violations = 0;
  std::uint64_t implication_violations = 0;  // Invariant 2 held, Invariant 1 did not
  std::uint64_t sort_b_checks = 0;
  std::uint64_t sort_b_violations = 0;  // B_t or frozen order changed by a sort sub-step
  std::uint64_t b_identity_violations = 0;  // B_t != inversions of the frozen order
  std::uint64_t width_bound_violations = 0;
  std::uint64_t triangle_violations = 0;
  std::uint64_t blame_anomalies = 0;
  std::uint64_t unexplained_pairings = 0;
  std::uint64_t lemma6_checks = 0;
  std::uint64_t lemma6_violations = 0;
  std::uint64_t lemma7_checks = 0;
  std::uint64_t lemma7_violations = 0;
  std::uint64_t replay_checks = 0;
  std::uint64_t replay_mismatches = 0;  // freeze's S_t vs the raw replay
  std::map<std::string, std::uint64_t> swap_cases;
  std::vector<std::string> dumps;  // snapshot dumps of the first few violations

  std::uint64_t hard_violations() const;
  void merge(const InstrumentStats& other);
};

struct InstrumentOptions {
  SorterKind sorter = SorterKind::repeated_insertion;
  std::uint64_t check_every = 5;  // Lemma 6/7 and replay cadence, in steps
  std::size_t max_dumps = 4;
  std::uint64_t sample_every = 0;  // time series cadence; 0 disables
};

/// Runs a sorter with the full analysis apparatus attached: frozen snapshot,
/// bad-inversion classification and counter ledger are rebuilt around every
/// sort sub-step and random swap, and every checkable claim is evaluated.
class InstrumentedRun : public StepObserver {
 public:
  InstrumentedRun(EvolvingState state, const InstrumentOptions& options);

  StepOutcome step();
  /// Runs until `rounds` insertion rounds completed or `max_steps` elapsed.
  void run(std::uint64_t rounds, std::uint64_t max_steps);

  const EvolvingState& state() const { return state_; }
  const SorterMachine& machine() const { return machine_; }
  const CounterLedger& ledger() const { return ledger_; }
  const InstrumentStats& stats() const { return stats_; }
  const std::vector<RoundRecord>& rounds() const { return rounds_; }
  const std::vector<TimeSeriesRecord>& series() const { return series_; }
  /// Good random swaps (those that decreased I) per completed round.
  const std::vector<std::uint64_t>& round_good_swaps() const { return round_good_; }
  std::uint64_t good_swaps() const { return good_swaps_; }
  std::int64_t current_B() const { return current_B_; }

  void after_sort(const EvolvingState& state, const SorterMachine& machine) override;
  void after_random_swap(const EvolvingState& state, const SorterMachine& machine,
                         const RandomSwap& swap) override;

 private:
  bool instrumenting() const;
  void resync();
  void record_dump(const std::string& what, const FrozenSnapshot& snap);

  EvolvingState state_;
  InstrumentOptions options_;
  SorterMachine machine_;
  CounterLedger ledger_;
  InstrumentStats stats_;
  std::vector<RoundRecord> rounds_;
  std::vector<TimeSeriesRecord> series_;
  std::int64_t current_B_ = 0;
  std::vector<Item> frozen_items_;  // frozen order behind current_B_
  std::int64_t round_fixes_ = 0;    // F recomputed from step logs
  std::uint64_t good_swaps_ = 0;
  std::uint64_t good_in_round_ = 0;
  std::vector<std::uint64_t> round_good_;
  std::uint32_t pending_flags_ = 0;
};

}  // namespace evo
