#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evo/evolving_state.hpp"
#include "evo/series.hpp"

namespace evo {

enum class SorterKind { repeated_insertion, quick_then_insertion, repeated_quicksort };
enum class Phase { quicksort_prelude, insertion_rounds };
enum class StepOutcome { comparison_made, round_completed, prelude_completed, pass_completed };

std::string_view to_string(SorterKind kind);
SorterKind parse_sorter_kind(std::string_view text);

/// Bookkeeping for one insertion-sort round (or one pass of the quicksort
/// baseline, with `insertion == false`).
struct RoundRecord {
  std::uint64_t round_number = 0;
  std::uint64_t t_s = 0;
  std::uint64_t t_e = 0;
  std::int64_t F = 0;  // comparisons whose guard held and whose swap fixed an inversion
  std::int64_t I_ts = 0;
  std::int64_t I_te = 0;
  std::int64_t max_drift = 0;  // max over the round of I_t - I_ts
  bool complete = false;
  bool insertion = true;

  std::int64_t length() const { return static_cast<std::int64_t>(t_e - t_s); }
};

/// Which Lemma-3 style identities a completed insertion round violates.
struct RoundCheck {
  bool length_identity = true;  // t_e - t_s == F + n - 1
  /// t_e - t_s <= n(n-1)/2 + n - 1: at most n(n-1)/2 real comparisons plus
  /// one failing guard per outer iteration.
  bool length_bound = true;
  bool drift_bound = true;      // max I_t - I_ts <= n - 1
  bool ok() const { return length_identity && length_bound && drift_bound; }
};
RoundCheck check_round(const RoundRecord& r, int n);

/// Split of the maintained list during an insertion round: positions
/// 0..i except j are semi-sorted, j is the active element, i+1..n-1 are
/// unsorted. `i == n` denotes a finished round: everything is semi-sorted.
struct Partition {
  int n = 0;
  Position i = 0;
  Position j = 0;

  bool complete() const { return i >= n; }
  bool is_active(Position p) const { return !complete() && p == j; }
  bool is_semi_sorted(Position p) const { return complete() || (p <= i && p != j); }
  bool is_unsorted(Position p) const { return !complete() && p > i; }
};

class SorterMachine;

/// Hooks into the two halves of a time step: the sorter's own action, then
/// the random swaps in the true order.
class StepObserver {
 public:
  virtual ~StepObserver() = default;
  virtual void after_sort(const EvolvingState&, const SorterMachine&) {}
  virtual void after_random_swap(const EvolvingState&, const SorterMachine&, const RandomSwap&) {}
};

/// Resumable sorter: each `advance` performs exactly one comparison step
/// (the j == 0 guard short-circuit counts as one) so the environment can
/// interleave random swaps.
class SorterMachine {
 public:
  SorterMachine(SorterKind kind, const EvolvingState& state);
  SorterMachine(SorterKind kind, const EvolvingState& state, std::uint64_t pivot_seed);

  StepOutcome advance(EvolvingState& state, StepObserver* observer = nullptr);
  /// One comparison of the randomized quicksort prelude.
  StepOutcome quicksort_prelude_advance(EvolvingState& state, StepObserver* observer = nullptr);

  SorterKind kind() const { return kind_; }
  Phase phase() const { return phase_; }
  int n() const { return n_; }
  Position i() const { return i_; }
  Position j() const { return j_; }
  Partition partition() const { return {n_, i_, j_}; }
  /// True while the step that finished a round is applying its random swaps.
  bool at_round_boundary() const { return i_ >= n_; }

  std::uint64_t rounds_completed() const { return rounds_completed_; }
  std::uint64_t passes_completed() const { return passes_completed_; }
  std::uint64_t prelude_comparisons() const { return prelude_comparisons_; }
  const RoundRecord& current_round() const { return round_; }
  const std::optional<RoundRecord>& last_completed() const { return last_; }

 private:
  struct Frame {
    Position lo = 0, hi = 0, scan = 0, store = 0;
    bool ready = false;
  };

  StepOutcome insertion_step(EvolvingState& state, StepObserver* observer);
  StepOutcome quicksort_step(EvolvingState& state, StepObserver* observer);
  void prepare_frame(EvolvingState& state, Frame& f);
  void finish(EvolvingState& state, StepObserver* observer);
  void begin_round(const EvolvingState& state);
  void close_round(const EvolvingState& state);

  SorterKind kind_;
  Phase phase_;
  int n_;
  Position i_ = 1;
  Position j_ = 1;
  Rng pivot_rng_;
  std::vector<Frame> frames_;
  bool pass_active_ = false;
  RoundRecord round_;
  std::optional<RoundRecord> last_;
  std::uint64_t rounds_completed_ = 0;
  std::uint64_t passes_completed_ = 0;
  std::uint64_t prelude_comparisons_ = 0;
};

struct RunBudget {
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> rounds;  // completed rounds (or passes for the baseline)
  std::uint64_t sample_every = 0;       // 0 disables the time series
};

struct RunResult {
  std::vector<RoundRecord> rounds;  // completed ones, then the partial one if any
  std::vector<TimeSeriesRecord> series;
  std::uint64_t steps = 0;
  std::uint64_t good_swaps = 0;
};

/// Drives `advance` until the budget is exhausted. Also tallies good random
/// swaps (those that decreased I) per round into `round_good_swaps`.
RunResult run_rounds(SorterMachine& machine, EvolvingState& state, const RunBudget& budget,
                     std::vector<std::uint64_t>* round_good_swaps = nullptr);

}  // namespace evo
