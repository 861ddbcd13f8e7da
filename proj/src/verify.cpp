#include "evo/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace evo {

using nlohmann::ordered_json;

namespace {

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<std::uint64_t> pinned_seeds(std::uint64_t base, std::uint64_t stream, int count) {
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < count; ++k) seeds.push_back(derive_seed(derive_seed(base, stream), k));
  return seeds;
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

RoundAudit round_sweep(const VerifySettings& s) {
  std::vector<RunSpec> specs;
  const std::size_t combos = s.round_n.size() * s.round_alpha.size();
  for (int k = 0; k < s.round_runs; ++k) {
    const std::size_t combo = static_cast<std::size_t>(k) % combos;
    RunSpec spec;
    spec.n = s.round_n[combo / s.round_alpha.size()];
    spec.alpha = s.round_alpha[combo % s.round_alpha.size()];
    spec.init = InitPolicy::uniform_random;
    spec.seed = derive_seed(derive_seed(s.seed, 1), k);
    specs.push_back(spec);
  }
  const auto audits = fan_out<RoundAudit>(
      specs.size(),
      [&](std::size_t k) {
        const auto nn = static_cast<std::uint64_t>(specs[k].n) * specs[k].n;
        return audit_rounds(specs[k], s.round_min_rounds, (s.round_min_rounds + 1) * nn);
      },
      s.exec);
  RoundAudit total;
  for (const auto& a : audits) {
    total.merge(a);
    // A run that fell short of the round quota counts against the identity.
    if (a.rounds < s.round_min_rounds) {
      ++total.identity_violations;
      if (total.first_violation.empty()) total.first_violation = "run below the round quota";
    }
  }
  return total;
}

LemmaCheckSummary lemma_sweep(const VerifySettings& s, VerifyContext& ctx) {
  if (ctx.lemma) return *ctx.lemma;
  ExperimentConfig c;
  c.n_list = s.lemma_n;
  c.alpha = 1;
  c.sorter = SorterKind::repeated_insertion;
  c.init = InitPolicy::uniform_random;
  c.seeds = pinned_seeds(s.seed, 4, s.lemma_seeds);
  c.rounds = s.lemma_rounds;
  c.check_every = s.check_every;
  ctx.lemma = lemma_checks(c, s.exec);
  return *ctx.lemma;
}

}  // namespace

CriterionResult verify_round_identity(const VerifySettings& s) {
  Timer timer;
  const RoundAudit a = round_sweep(s);
  CriterionResult r;
  r.id = 1;
  r.title = "round length equals F + n - 1";
  r.passed = a.rounds > 0 && a.identity_violations == 0;
  r.detail = std::to_string(s.round_runs) + " runs, " + std::to_string(a.rounds) +
             " rounds, " + std::to_string(a.identity_violations) + " violations";
  if (!a.first_violation.empty()) r.detail += "; first: " + a.first_violation;
  r.data = to_json(a);
  r.seconds = timer.seconds();
  return r;
}

CriterionResult verify_round_drift(const VerifySettings& s) {
  Timer timer;
  const RoundAudit a = round_sweep(s);
  CriterionResult r;
  r.id = 2;
  r.title = "within-round drift I_t - I_ts <= n - 1";
  r.passed = a.rounds > 0 && a.drift_violations == 0;
  r.detail = std::to_string(a.rounds) + " rounds, " + std::to_string(a.drift_violations) +
             " violating steps, max drift " + std::to_string(a.max_drift);
  if (a.drift_violations != 0) r.detail += "; first: " + a.first_violation;
  r.data = to_json(a);
  r.seconds = timer.seconds();
  return r;
}

std::int64_t fuzz_inversion_counter(std::uint64_t seed, int max_n, int ops,
                                    std::int64_t* checkpoints) {
  Rng rng(seed);
  const int n = 2 + static_cast<int>(rng.uniform(static_cast<std::uint64_t>(max_n - 1)));
  const int alpha = static_cast<int>(rng.uniform(3));
  const auto init = static_cast<InitPolicy>(rng.uniform(3));
  const auto kind = static_cast<SorterKind>(rng.uniform(3));
  EvolvingState state(n, alpha, init, rng.next());
  SorterMachine machine(kind, state);
  std::int64_t mismatches = 0;
  const auto check = [&] {
    if (checkpoints) ++*checkpoints;
    if (state.inversions() != brute_force_inversions(state) || consistency_error(state)) {
      ++mismatches;
    }
  };
  const auto pos = [&] { return static_cast<Position>(rng.uniform(n)); };
  check();
  for (int k = 0; k < ops; ++k) {
    switch (rng.uniform(6)) {
      case 0:  // a whole sorter step
        if (!state.step_open()) machine.advance(state);
        break;
      case 1:
        if (!state.step_open()) {
          const Position a = pos();
          const Position b = (a + 1 + static_cast<Position>(rng.uniform(n - 1))) % n;
          state.compare(a, b);
        }
        break;
      case 2: {  // fix a random inverted adjacent pair, if any
        std::vector<Position> inverted;
        for (Position j = 1; j < n; ++j) {
          if (state.rank_at(j) < state.rank_at(j - 1)) inverted.push_back(j);
        }
        if (!inverted.empty()) state.sorter_swap(inverted[rng.uniform(inverted.size())]);
        break;
      }
      case 3:
        state.permute_swap(pos(), pos());
        break;
      case 4:
        if (!state.step_open()) state.compare_short_circuit();
        state.finish_step();
        break;
      default:
        if (!state.step_open()) {
          state.apply_rank_swap(static_cast<Rank>(rng.uniform(n - 1)));
        }
        break;
    }
    check();
  }
  return mismatches;
}

CriterionResult verify_inversion_oracle(const VerifySettings& s) {
  Timer timer;
  struct Out {
    std::int64_t mismatches = 0;
    std::int64_t checkpoints = 0;
  };
  const auto outs = fan_out<Out>(
      static_cast<std::size_t>(s.fuzz_cases),
      [&](std::size_t k) {
        Out o;
        o.mismatches = fuzz_inversion_counter(derive_seed(derive_seed(s.seed, 3), k),
                                              s.fuzz_max_n, s.fuzz_ops, &o.checkpoints);
        return o;
      },
      s.exec);
  std::int64_t mismatches = 0, checkpoints = 0;
  for (const auto& o : outs) {
    mismatches += o.mismatches;
    checkpoints += o.checkpoints;
  }
  CriterionResult r;
  r.id = 3;
  r.title = "incremental inversion count matches brute force";
  r.passed = mismatches == 0 && s.fuzz_cases > 0;
  r.detail = std::to_string(s.fuzz_cases) + " cases, " + std::to_string(checkpoints) +
             " checkpoints, " + std::to_string(mismatches) + " mismatches";
  r.data = {{"cases", s.fuzz_cases}, {"checkpoints", checkpoints}, {"mismatches", mismatches}};
  r.seconds = timer.seconds();
  return r;
}

CriterionResult verify_invariants(const VerifySettings& s, VerifyContext& ctx) {
  Timer timer;
  const LemmaCheckSummary sum = lemma_sweep(s, ctx);
  const InstrumentStats& st = sum.stats;
  CriterionResult r;
  r.id = 4;
  r.title = "counter invariants hold after every random swap; sort sub-steps keep B";
  r.passed = st.rounds > 0 && st.invariant1_violations == 0 && st.invariant2_violations == 0 &&
             st.sort_b_violations == 0;
  r.detail = std::to_string(sum.runs) + " runs, " + std::to_string(st.rounds) + " rounds, " +
             std::to_string(st.swaps) + " swaps; invariant 1 violations " +
             std::to_string(st.invariant1_violations) + ", invariant 2 violations " +
             std::to_string(st.invariant2_violations) + ", B changes by sort " +
             std::to_string(st.sort_b_violations) + " of " + std::to_string(st.sort_b_checks);
  if (!st.dumps.empty()) r.detail += "; first dump: " + st.dumps.front();
  r.data = to_json(sum);
  r.seconds = timer.seconds();
  return r;
}

CriterionResult verify_lemma_bounds(const VerifySettings& s, VerifyContext& ctx) {
  Timer timer;
  const LemmaCheckSummary sum = lemma_sweep(s, ctx);
  const InstrumentStats& st = sum.stats;
  CriterionResult r;
  r.id = 5;
  r.title = "remaining-steps and bad-inversion bounds; freeze matches replay";
  r.passed = st.lemma6_checks > 0 && st.lemma6_violations == 0 && st.lemma7_violations == 0 &&
             st.replay_mismatches == 0;
  r.detail = std::to_string(st.lemma6_checks) + " checks; S bound violations " +
             std::to_string(st.lemma6_violations) + ", B <= 4 kappa violations " +
             std::to_string(st.lemma7_violations) + ", replay mismatches " +
             std::to_string(st.replay_mismatches);
  r.data = to_json(sum);
  r.seconds = timer.seconds();
  return r;
}

CriterionResult verify_balls_bins(const VerifySettings& s) {
  Timer timer;
  ExperimentConfig c;
  c.c = s.bins_c;
  c.trials = s.bins_trials;
  c.seeds = {derive_seed(s.seed, 6)};
  const BallsBinsSummary b = balls_bins_preset(s.bins_n, c, s.exec);
  CriterionResult r;
  r.id = 6;
  r.title = "sum of squared bin loads stays below 3 c^2 n";
  r.passed = b.none.exceeding == 0 && b.adversarial.exceeding == 0 && s.bins_trials > 0;
  r.detail = "threshold " + fmt(b.none.threshold, 8) + "; max none " +
             std::to_string(b.none.max_sum) + ", max adversarial " +
             std::to_string(b.adversarial.max_sum) + "; exceeding " +
             std::to_string(b.none.exceeding + b.adversarial.exceeding);
  r.data = {{"none", to_json(b.none)}, {"adversarial_lowest", to_json(b.adversarial)}};
  r.seconds = timer.seconds();
  return r;
}

CriterionResult verify_steady_state(const VerifySettings& s, VerifyContext& ctx) {
  Timer timer;
  ExperimentConfig c;
  c.n_list = s.sweep_n;
  c.alpha = 1;
  c.sorter = SorterKind::repeated_insertion;
  c.init = InitPolicy::uniform_random;
  c.seeds = pinned_seeds(s.seed, 7, s.sweep_seeds);
  c.scaling_tolerance = s.scaling_tolerance;
  const SteadyStateSummary sum = steady_state_summary(c, s.exec);
  double max_ratio = 0;
  for (const auto& row : sum.rows) max_ratio = std::max(max_ratio, row.median_ratio);
  ctx.beta = s.beta_margin * max_ratio;

  CriterionResult r;
  r.id = 7;
  r.title = "steady-state median I/n is stable across n";
  r.passed = !sum.rows.empty() && sum.scaling_ok;
  std::string ratios;
  for (const auto& row : sum.rows) {
    ratios += (ratios.empty() ? "" : ", ") + std::to_string(row.n) + ":" + fmt(row.median_ratio);
  }
  r.detail = "median I/n {" + ratios + "}, max relative change " +
             fmt(sum.max_relative_change) + " (tolerance " + fmt(sum.tolerance) + ")";
  r.data = to_json(sum);
  r.data["beta"] = *ctx.beta;
  r.seconds = timer.seconds();
  return r;
}

CriterionResult verify_convergence(const VerifySettings& s, VerifyContext& ctx) {
  Timer timer;
  if (!ctx.beta) verify_steady_state(s, ctx);
  const double beta = *ctx.beta;

  ExperimentConfig c;
  c.n_list = s.sweep_n;
  c.alpha = 1;
  c.init = InitPolicy::reversed;
  c.seeds = pinned_seeds(s.seed, 8, s.sweep_seeds);
  c.sorter = SorterKind::quick_then_insertion;
  const ConvergenceSummary quick = convergence_time(c, beta, s.exec);
  c.sorter = SorterKind::repeated_insertion;
  const ConvergenceSummary insertion = convergence_time(c, beta, s.exec);

  CriterionResult r;
  r.id = 8;
  r.title = "hitting time scales as n log n with a quicksort prelude, n^2 without";
  r.passed = quick.censored == 0 && insertion.censored == 0 &&
             quick.spread_nlogn <= s.ratio_factor && insertion.spread_n2 <= s.ratio_factor;
  r.detail = "beta " + fmt(beta) + "; quick t/(n log2 n) spread " + fmt(quick.spread_nlogn) +
             ", insertion t/n^2 spread " + fmt(insertion.spread_n2) + " (limit " +
             fmt(s.ratio_factor) + "); censored " +
             std::to_string(quick.censored + insertion.censored);
  r.data = {{"quick_then_insertion", to_json(quick)}, {"repeated_insertion", to_json(insertion)}};
  r.seconds = timer.seconds();
  return r;
}

CriterionResult verify_good_swap_fraction(const VerifySettings& s) {
  Timer timer;
  ExperimentConfig c;
  c.n_list = {s.fraction_n};
  c.alpha = 1;
  c.sorter = SorterKind::repeated_insertion;
  c.init = InitPolicy::uniform_random;
  c.seeds = pinned_seeds(s.seed, 9, s.fraction_seeds);
  c.sample_every = std::numeric_limits<std::uint64_t>::max();  // rounds only
  const auto runs = run_sweep(c, s.exec);
  const std::uint64_t burn = c.burn_in_for(s.fraction_n);

  double min_fraction = std::numeric_limits<double>::infinity();
  std::int64_t rounds = 0, below = 0;
  for (const auto& run : runs) {
    const auto fractions = good_swap_fraction(run.result.rounds, run.round_good_swaps, c.alpha);
    std::size_t k = 0;
    for (const auto& round : run.result.rounds) {
      if (!round.complete) continue;
      const auto& f = fractions[k++];
      if (round.t_s < burn || !f) continue;
      ++rounds;
      min_fraction = std::min(min_fraction, *f);
      if (!(*f > s.epsilon)) ++below;
    }
  }
  CriterionResult r;
  r.id = 9;
  r.title = "every steady-state round has a good-swap fraction above epsilon";
  r.passed = rounds > 0 && below == 0;
  r.detail = std::to_string(rounds) + " rounds, minimum fraction " + fmt(min_fraction) +
             " vs epsilon " + fmt(s.epsilon) + ", " + std::to_string(below) + " below";
  r.data = {{"rounds", rounds},
            {"min_fraction", rounds > 0 ? ordered_json(min_fraction) : ordered_json(nullptr)},
            {"epsilon", s.epsilon},
            {"below", below}};
  r.seconds = timer.seconds();
  return r;
}

CriterionResult verify_degenerate(const VerifySettings& s) {
  Timer timer;
  std::int64_t runs = 0, failures = 0;
  std::string first;
  const auto fail = [&](const std::string& what) {
    ++failures;
    if (first.empty()) first = what;
  };
  for (int n : s.degenerate_n) {
    for (int k = 0; k < s.degenerate_seeds; ++k) {
      const std::uint64_t seed = derive_seed(derive_seed(s.seed, 10), k);
      for (InitPolicy init : {InitPolicy::uniform_random, InitPolicy::reversed}) {
        const std::string tag = "n=" + std::to_string(n) + " seed=" + std::to_string(seed);
        {
          ++runs;
          EvolvingState state(n, 0, init, seed);
          SorterMachine m(SorterKind::repeated_insertion, state);
          const std::int64_t I0 = state.inversions();
          while (m.advance(state) != StepOutcome::round_completed) {
          }
          const RoundRecord& r = *m.last_completed();
          if (state.inversions() != 0) fail(tag + ": insertion round left inversions");
          if (r.F != I0) fail(tag + ": fixed " + std::to_string(r.F) + " of " + std::to_string(I0));
        }
        {
          ++runs;
          EvolvingState state(n, 0, init, seed);
          SorterMachine m(SorterKind::quick_then_insertion, state);
          while (m.advance(state) != StepOutcome::prelude_completed) {
          }
          if (state.inversions() != 0) fail(tag + ": quicksort prelude left inversions");
        }
      }
    }
  }
  CriterionResult r;
  r.id = 10;
  r.title = "with no random swaps one round sorts and fixes exactly I_ts";
  r.passed = failures == 0 && runs > 0;
  r.detail = std::to_string(runs) + " runs, " + std::to_string(failures) + " failures";
  if (!first.empty()) r.detail += "; first: " + first;
  r.data = {{"runs", runs}, {"failures", failures}};
  r.seconds = timer.seconds();
  return r;
}

std::vector<CriterionResult> verify_all(const VerifySettings& s) {
  VerifyContext ctx;
  std::vector<CriterionResult> out;
  out.push_back(verify_round_identity(s));
  out.push_back(verify_round_drift(s));
  out.push_back(verify_inversion_oracle(s));
  out.push_back(verify_invariants(s, ctx));
  out.push_back(verify_lemma_bounds(s, ctx));
  out.push_back(verify_balls_bins(s));
  out.push_back(verify_steady_state(s, ctx));
  out.push_back(verify_convergence(s, ctx));
  out.push_back(verify_good_swap_fraction(s));
  out.push_back(verify_degenerate(s));
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.passed ? "PASS" : "FAIL") << "  " << std::setw(2) << r.id << "  " << r.title << "  ("
    << r.detail << ") [" << std::fixed << std::setprecision(1) << r.seconds << "s]";
  return s.str();
}

}  // namespace evo
