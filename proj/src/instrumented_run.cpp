#include "evo/instrumented_run.hpp"

#include <algorithm>

#include "evo/kendall.hpp"

namespace evo {

std::uint64_t InstrumentStats::hard_violations() const {
  return round_identity_violations + round_length_violations + drift_violations +
         invariant1_violations + invariant2_violations + sort_b_violations +
         b_identity_violations + width_bound_violations + triangle_violations +
         lemma6_violations + lemma7_violations + replay_mismatches;
}

void InstrumentStats::merge(const InstrumentStats& o) {
  steps += o.steps;
  rounds += o.rounds;
  round_identity_violations += o.round_identity_violations;
  round_length_violations += o.round_length_violations;
  drift_violations += o.drift_violations;
  swaps += o.swaps;
  invariant1_checks += o.invariant1_checks;
  invariant1_violations += o.invariant1_violations;
  invariant2_checks += o.invariant2_checks;
  invariant2_violations += o.invariant2_violations;
  implication_violations += o.implication_violations;
  sort_b_checks += o.sort_b_checks;
  sort_b_violations += o.sort_b_violations;
  b_identity_violations += o.b_identity_violations;
  width_bound_violations += o.width_bound_violations;
  triangle_violations += o.triangle_violations;
  blame_anomalies += o.blame_anomalies;
  unexplained_pairings += o.unexplained_pairings;
  lemma6_checks += o.lemma6_checks;
  lemma6_violations += o.lemma6_violations;
  lemma7_checks += o.lemma7_checks;
  lemma7_violations += o.lemma7_violations;
  replay_checks += o.replay_checks;
  replay_mismatches += o.replay_mismatches;
  for (const auto& [k, v] : o.swap_cases) swap_cases[k] += v;
  for (const auto& d : o.dumps) dumps.push_back(d);
}

InstrumentedRun::InstrumentedRun(EvolvingState state, const InstrumentOptions& options)
    : state_(std::move(state)),
      options_(options),
      machine_(options.sorter, state_),
      ledger_(state_.n()) {
  if (options.sorter == SorterKind::repeated_quicksort) {
    throw ContractViolation("InstrumentedRun: the quicksort baseline has no insertion rounds");
  }
  if (state_.alpha() != 1) throw ContractViolation("InstrumentedRun: needs alpha == 1");
  if (options.check_every == 0) throw ContractViolation("InstrumentedRun: check_every must be > 0");
  resync();
}

bool InstrumentedRun::instrumenting() const {
  return machine_.phase() == Phase::insertion_rounds;
}

void InstrumentedRun::resync() {
  if (!instrumenting()) return;
  ledger_.reset(state_, machine_);
  const FrozenSnapshot& snap = ledger_.snapshot();
  current_B_ = classify_bad_inversions(state_, machine_, snap).B();
  frozen_items_ = snap.hat_items;
}

void InstrumentedRun::record_dump(const std::string& what, const FrozenSnapshot& snap) {
  if (stats_.dumps.size() >= options_.max_dumps) return;
  stats_.dumps.push_back(what + " seed=" + std::to_string(state_.seed()) + " " +
                         dump_snapshot(snap, &ledger_));
}

void InstrumentedRun::after_sort(const EvolvingState& state, const SorterMachine& machine) {
  if (!instrumenting()) return;
  const FrozenSnapshot snap = freeze(state, machine);
  const auto report = classify_bad_inversions(state, machine, snap);
  ++stats_.sort_b_checks;
  if (report.B() != current_B_ || snap.hat_items != frozen_items_) {
    ++stats_.sort_b_violations;
    record_dump("sort sub-step changed B", snap);
  }
}

void InstrumentedRun::after_random_swap(const EvolvingState& state, const SorterMachine& machine,
                                        const RandomSwap& swap) {
  // The round-closing step's swaps belong to the next round, which resync
  // starts from scratch.
  if (!instrumenting() || machine.at_round_boundary()) return;
  const CounterExchange& ex = ledger_.on_random_swap(state, machine, swap);
  ++stats_.swaps;
  ++stats_.swap_cases[std::string(to_string(ex.kase))];
  if (ex.unexplained) ++stats_.unexplained_pairings;
  ledger_.clear_log();

  const FrozenSnapshot& snap = ledger_.snapshot();
  const auto inv1 = check_invariant1(ledger_, snap);
  const auto inv2 = check_invariant2(ledger_, snap);
  ++stats_.invariant1_checks;
  ++stats_.invariant2_checks;
  if (!inv1.ok()) {
    ++stats_.invariant1_violations;
    record_dump(inv1.first_violation, snap);
  }
  if (!inv2.ok()) {
    ++stats_.invariant2_violations;
    record_dump(inv2.first_violation, snap);
  }
  if (inv2.ok() && !inv1.ok()) ++stats_.implication_violations;

  const auto report = classify_bad_inversions(state, machine, snap);
  const std::int64_t B = report.B();
  if (B != count_inversions(snap.hat_sigma)) {
    ++stats_.b_identity_violations;
    record_dump("B differs from frozen inversions", snap);
  }
  if (B > minima_width_bound(snap)) {
    ++stats_.width_bound_violations;
    record_dump("B above width bound", snap);
  }
  if (!check_triangle(ledger_, snap).holds) ++stats_.triangle_violations;
  stats_.blame_anomalies += static_cast<std::uint64_t>(report.blame_anomalies);
  current_B_ = B;
  frozen_items_ = snap.hat_items;
}

StepOutcome InstrumentedRun::step() {
  const bool in_round = instrumenting();
  const StepOutcome out = machine_.advance(state_, this);
  ++stats_.steps;
  const StepLog& log = state_.last_step();
  if (in_round && log.sort_swap_applied) ++round_fixes_;
  for (const auto& s : log.random_swaps) {
    if (s.delta < 0) {
      ++good_swaps_;
      ++good_in_round_;
    }
  }

  if (out == StepOutcome::round_completed) {
    const RoundRecord& r = *machine_.last_completed();
    const RoundCheck c = check_round(r, state_.n());
    if (!c.length_identity || r.F != round_fixes_) ++stats_.round_identity_violations;
    if (!c.length_bound) ++stats_.round_length_violations;
    if (!c.drift_bound) ++stats_.drift_violations;
    ++stats_.rounds;
    rounds_.push_back(r);
    round_fixes_ = 0;
    round_good_.push_back(good_in_round_);
    good_in_round_ = 0;
    pending_flags_ |= kRoundEnd;
    resync();
  } else if (out == StepOutcome::prelude_completed) {
    round_fixes_ = 0;
    good_in_round_ = 0;
    pending_flags_ |= kPreludeEnd;
    resync();
  }

  std::optional<std::int64_t> S;
  if (instrumenting() && stats_.steps % options_.check_every == 0) {
    const FrozenSnapshot snap = freeze(state_, machine_);
    S = snap.remaining_steps;
    const auto report = classify_bad_inversions(state_, machine_, snap);
    ++stats_.lemma6_checks;
    if (!check_lemma6(state_, snap, machine_.current_round(), report.B()).holds) {
      ++stats_.lemma6_violations;
      pending_flags_ |= kViolation;
      record_dump("lemma 6", snap);
    }
    ++stats_.lemma7_checks;
    if (!check_lemma7(ledger_, report)) {
      ++stats_.lemma7_violations;
      pending_flags_ |= kViolation;
      record_dump("lemma 7", snap);
    }
    ++stats_.replay_checks;
    const std::vector<Rank> sigma(state_.sigma().begin(), state_.sigma().end());
    if (replay_remaining_steps(sigma, machine_.i(), machine_.j()) != snap.remaining_steps) {
      ++stats_.replay_mismatches;
    }
  }

  if (options_.sample_every != 0 && state_.clock() % options_.sample_every == 0) {
    TimeSeriesRecord rec;
    rec.t = state_.clock();
    rec.I = state_.inversions();
    rec.round = machine_.current_round().round_number;
    rec.S = S;
    if (instrumenting()) rec.B = current_B_;
    rec.good_swaps = good_swaps_;
    rec.flags = pending_flags_;
    pending_flags_ = 0;
    series_.push_back(rec);
  }
  return out;
}

void InstrumentedRun::run(std::uint64_t rounds, std::uint64_t max_steps) {
  std::uint64_t steps = 0;
  while (stats_.rounds < rounds && steps < max_steps) {
    step();
    ++steps;
  }
}

}  // namespace evo
