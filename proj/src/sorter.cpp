#include "evo/sorter.hpp"

#include <algorithm>
#include <stdexcept>

namespace evo {

std::string_view to_string(SorterKind kind) {
  switch (kind) {
    case SorterKind::repeated_insertion:
      return "repeated-insertion";
    case SorterKind::quick_then_insertion:
      return "quick-then-insertion";
    case SorterKind::repeated_quicksort:
      return "repeated-quicksort";
  }
  return "?";
}

SorterKind parse_sorter_kind(std::string_view text) {
  if (text == "repeated-insertion" || text == "repeated_insertion") {
    return SorterKind::repeated_insertion;
  }
  if (text == "quick-then-insertion" || text == "quick_then_insertion") {
    return SorterKind::quick_then_insertion;
  }
  if (text == "repeated-quicksort" || text == "repeated_quicksort" ||
      text == "repeated_quicksort_baseline") {
    return SorterKind::repeated_quicksort;
  }
  throw std::invalid_argument("unknown sorter kind: " + std::string(text));
}

RoundCheck check_round(const RoundRecord& r, int n) {
  RoundCheck c;
  const std::int64_t len = r.length();
  const std::int64_t nn = n;
  c.length_identity = len == r.F + nn - 1;
  c.length_bound = 2 * len <= (nn - 1) * (nn + 2);
  c.drift_bound = r.max_drift <= nn - 1;
  return c;
}

SorterMachine::SorterMachine(SorterKind kind, const EvolvingState& state)
    : SorterMachine(kind, state, derive_seed(state.seed(), 0x5157)) {}

SorterMachine::SorterMachine(SorterKind kind, const EvolvingState& state,
                             std::uint64_t pivot_seed)
    : kind_(kind),
      phase_(kind == SorterKind::repeated_insertion ? Phase::insertion_rounds
                                                    : Phase::quicksort_prelude),
      n_(state.n()),
      pivot_rng_(pivot_seed) {
  begin_round(state);
  if (phase_ == Phase::quicksort_prelude) round_.insertion = false;
}

void SorterMachine::begin_round(const EvolvingState& state) {
  round_ = RoundRecord{};
  round_.round_number = kind_ == SorterKind::repeated_quicksort ? passes_completed_ + 1
                                                                : rounds_completed_ + 1;
  round_.t_s = state.clock();
  round_.I_ts = state.inversions();
  round_.insertion = phase_ == Phase::insertion_rounds;
  i_ = 1;
  j_ = 1;
}

void SorterMachine::close_round(const EvolvingState& state) {
  round_.t_e = state.clock();
  round_.I_te = state.inversions();
  round_.complete = true;
  last_ = round_;
}

void SorterMachine::finish(EvolvingState& state, StepObserver* observer) {
  if (observer) {
    observer->after_sort(state, *this);
    state.finish_step([&](const RandomSwap& s) { observer->after_random_swap(state, *this, s); });
  } else {
    state.finish_step();
  }
  round_.max_drift = std::max(round_.max_drift, state.inversions() - round_.I_ts);
}

StepOutcome SorterMachine::advance(EvolvingState& state, StepObserver* observer) {
  if (state.n() != n_) throw ContractViolation("SorterMachine: state size mismatch");
  if (phase_ == Phase::quicksort_prelude || kind_ == SorterKind::repeated_quicksort) {
    return quicksort_step(state, observer);
  }
  return insertion_step(state, observer);
}

StepOutcome SorterMachine::quicksort_prelude_advance(EvolvingState& state,
                                                     StepObserver* observer) {
  if (kind_ != SorterKind::quick_then_insertion || phase_ != Phase::quicksort_prelude) {
    throw ContractViolation("quicksort_prelude_advance: machine is not in a prelude");
  }
  return quicksort_step(state, observer);
}

StepOutcome SorterMachine::insertion_step(EvolvingState& state, StepObserver* observer) {
  bool guard_failed = true;
  if (j_ == 0) {
    state.compare_short_circuit();
  } else if (state.compare(j_, j_ - 1) == Ordering::a_first) {
    state.sorter_swap(j_);
    --j_;
    ++round_.F;
    guard_failed = false;
  } else {
    // l[j] > l[j-1]: insertion of the active element ends here.
  }
  if (guard_failed) {
    ++i_;
    j_ = i_;  // i == n marks the finished round until the step closes
  }
  finish(state, observer);
  if (i_ < n_) return StepOutcome::comparison_made;

  close_round(state);
  ++rounds_completed_;
  begin_round(state);
  return StepOutcome::round_completed;
}

void SorterMachine::prepare_frame(EvolvingState& state, Frame& f) {
  const auto width = static_cast<std::uint64_t>(f.hi - f.lo + 1);
  const Position pivot = f.lo + static_cast<Position>(pivot_rng_.uniform(width));
  state.permute_swap(pivot, f.hi);
  f.scan = f.lo;
  f.store = f.lo;
  f.ready = true;
}

StepOutcome SorterMachine::quicksort_step(EvolvingState& state, StepObserver* observer) {
  if (!pass_active_) {
    frames_.push_back(Frame{0, static_cast<Position>(n_ - 1)});
    pass_active_ = true;
  }
  if (!frames_.back().ready) prepare_frame(state, frames_.back());

  Frame& f = frames_.back();
  // Lomuto partition around the pivot parked at f.hi.
  if (state.compare(f.scan, f.hi) == Ordering::a_first) {
    state.permute_swap(f.scan, f.store);
    ++f.store;
  }
  ++f.scan;
  if (f.scan == f.hi) {
    const Frame done = f;
    frames_.pop_back();
    state.permute_swap(done.store, done.hi);
    if (done.hi - (done.store + 1) >= 1) frames_.push_back(Frame{done.store + 1, done.hi});
    if ((done.store - 1) - done.lo >= 1) frames_.push_back(Frame{done.lo, done.store - 1});
    if (!frames_.empty()) prepare_frame(state, frames_.back());
  }
  if (phase_ == Phase::quicksort_prelude) ++prelude_comparisons_;
  finish(state, observer);

  if (!frames_.empty()) return StepOutcome::comparison_made;
  pass_active_ = false;
  if (kind_ == SorterKind::repeated_quicksort) {
    close_round(state);
    ++passes_completed_;
    begin_round(state);
    return StepOutcome::pass_completed;
  }
  phase_ = Phase::insertion_rounds;
  begin_round(state);
  return StepOutcome::prelude_completed;
}

RunResult run_rounds(SorterMachine& machine, EvolvingState& state, const RunBudget& budget,
                     std::vector<std::uint64_t>* round_good_swaps) {
  RunResult result;
  if (!budget.steps && !budget.rounds) {
    throw std::invalid_argument("run_rounds: budget needs a step or round limit");
  }

  std::uint64_t good_in_round = 0;
  std::uint64_t completed = 0;
  std::uint32_t pending_flags = 0;
  while (!(budget.rounds && completed >= *budget.rounds) &&
         !(budget.steps && result.steps >= *budget.steps)) {
    const StepOutcome out = machine.advance(state);
    ++result.steps;
    for (const auto& s : state.last_step().random_swaps) {
      if (s.delta < 0) {
        ++good_in_round;
        ++result.good_swaps;
      }
    }
    if (out == StepOutcome::round_completed || out == StepOutcome::pass_completed) {
      result.rounds.push_back(*machine.last_completed());
      ++completed;
      if (round_good_swaps) round_good_swaps->push_back(good_in_round);
      good_in_round = 0;
      pending_flags |= out == StepOutcome::round_completed ? kRoundEnd : kPassEnd;
    } else if (out == StepOutcome::prelude_completed) {
      good_in_round = 0;
      pending_flags |= kPreludeEnd;
    }
    if (budget.sample_every != 0 && state.clock() % budget.sample_every == 0) {
      TimeSeriesRecord rec;
      rec.t = state.clock();
      rec.I = state.inversions();
      rec.round = machine.current_round().round_number;
      rec.good_swaps = result.good_swaps;
      rec.flags = pending_flags;
      pending_flags = 0;
      result.series.push_back(rec);
    }
  }
  if (machine.current_round().t_s < state.clock()) {
    RoundRecord partial = machine.current_round();
    partial.t_e = state.clock();
    partial.I_te = state.inversions();
    partial.complete = false;
    result.rounds.push_back(partial);
  }
  return result;
}

}  // namespace evo
