#include "evo/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace evo {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(InitPolicy p) {
  switch (p) {
    case InitPolicy::identity:
      return "identity";
    case InitPolicy::reversed:
      return "reversed";
    case InitPolicy::uniform_random:
      return "uniform_random";
  }
  return "?";
}

InitPolicy parse_init_policy(std::string_view text) {
  if (text == "identity") return InitPolicy::identity;
  if (text == "reversed") return InitPolicy::reversed;
  if (text == "uniform_random" || text == "uniform-random" || text == "random") {
    return InitPolicy::uniform_random;
  }
  throw std::invalid_argument("unknown init policy: " + std::string(text));
}

void ExperimentConfig::validate() const {
  const auto fail = [](const std::string& what) { throw ConfigError("invalid config: " + what); };
  if (n_list.empty()) fail("n list is empty");
  for (int n : n_list) {
    if (n < 2) fail("n must be >= 2");
  }
  if (alpha < 0) fail("alpha must be >= 0");
  if (seeds.empty()) fail("seed list is empty");
  if (steps && *steps == 0) fail("steps must be positive");
  if (rounds && *rounds == 0) fail("rounds must be positive");
  if (sample_every && *sample_every == 0) fail("sample_every must be >= 1");
  if (!(c > 0)) fail("c must be positive");
  if (trials < 0) fail("trials must be >= 0");
  if (beta && !(*beta > 0)) fail("beta must be positive");
  if (!(epsilon > 0)) fail("epsilon must be positive");
  if (!(round_length_c > 0)) fail("round_length_c must be positive");
  if (!(scaling_tolerance > 0)) fail("scaling_tolerance must be positive");
  if (!(ratio_factor >= 1)) fail("ratio_factor must be >= 1");
  if (!(beta_margin > 0)) fail("beta_margin must be positive");
  if (check_every == 0) fail("check_every must be >= 1");
}

std::uint64_t ExperimentConfig::burn_in_for(int n) const {
  if (burn_in) return *burn_in;
  const auto nn = static_cast<std::uint64_t>(n);
  if (sorter == SorterKind::quick_then_insertion) {
    return static_cast<std::uint64_t>(std::ceil(8.0 * n * std::log2(static_cast<double>(n))));
  }
  return 2 * nn * nn;
}

std::uint64_t ExperimentConfig::sample_every_for(int n) const {
  return sample_every ? *sample_every : static_cast<std::uint64_t>(n);
}

namespace {

template <typename T>
ordered_json opt(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <typename T>
void read_opt(const json& j, const char* key, std::optional<T>& into) {
  if (!j.contains(key)) return;
  if (j[key].is_null()) {
    into.reset();
  } else {
    into = j[key].get<T>();
  }
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + mid);
  return (lo + hi) / 2;
}

double spread(const std::vector<double>& v) {
  if (v.empty()) return 0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*lo <= 0) return std::numeric_limits<double>::infinity();
  return *hi / *lo;
}

}  // namespace

ordered_json to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["preset"] = c.preset;
  j["n"] = c.n_list;
  j["alpha"] = c.alpha;
  j["sorter"] = std::string(to_string(c.sorter));
  j["init"] = std::string(to_string(c.init));
  j["seeds"] = c.seeds;
  j["steps"] = opt(c.steps);
  j["rounds"] = opt(c.rounds);
  j["sample_every"] = opt(c.sample_every);
  j["burn_in"] = opt(c.burn_in);
  j["instrument"] = c.instrument;
  j["out"] = c.out;
  j["c"] = c.c;
  j["trials"] = c.trials;
  j["beta"] = opt(c.beta);
  j["epsilon"] = c.epsilon;
  j["round_length_c"] = c.round_length_c;
  j["scaling_tolerance"] = c.scaling_tolerance;
  j["ratio_factor"] = c.ratio_factor;
  j["beta_margin"] = c.beta_margin;
  j["check_every"] = c.check_every;
  return j;
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig c) {
  static const char* const kKeys[] = {
      "preset", "n",       "alpha",        "sorter", "init",    "seeds",          "seed",
      "steps",  "rounds",  "sample_every", "burn_in", "instrument", "out",          "c",
      "trials", "beta",    "epsilon",      "round_length_c", "scaling_tolerance", "ratio_factor",
      "beta_margin", "check_every"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      throw ConfigError("unknown config key: " + key);
    }
  }
  try {
    if (j.contains("preset")) c.preset = j["preset"].get<std::string>();
    if (j.contains("n")) {
      c.n_list = j["n"].is_array() ? j["n"].get<std::vector<int>>()
                                   : std::vector<int>{j["n"].get<int>()};
    }
    if (j.contains("alpha")) c.alpha = j["alpha"].get<int>();
    if (j.contains("sorter")) c.sorter = parse_sorter_kind(j["sorter"].get<std::string>());
    if (j.contains("init")) c.init = parse_init_policy(j["init"].get<std::string>());
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (j.contains("seed")) c.seeds = {j["seed"].get<std::uint64_t>()};
    read_opt(j, "steps", c.steps);
    read_opt(j, "rounds", c.rounds);
    read_opt(j, "sample_every", c.sample_every);
    read_opt(j, "burn_in", c.burn_in);
    if (j.contains("instrument")) c.instrument = j["instrument"].get<bool>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("c")) c.c = j["c"].get<double>();
    if (j.contains("trials")) c.trials = j["trials"].get<std::int64_t>();
    read_opt(j, "beta", c.beta);
    if (j.contains("epsilon")) c.epsilon = j["epsilon"].get<double>();
    if (j.contains("round_length_c")) c.round_length_c = j["round_length_c"].get<double>();
    if (j.contains("scaling_tolerance")) {
      c.scaling_tolerance = j["scaling_tolerance"].get<double>();
    }
    if (j.contains("ratio_factor")) c.ratio_factor = j["ratio_factor"].get<double>();
    if (j.contains("beta_margin")) c.beta_margin = j["beta_margin"].get<double>();
    if (j.contains("check_every")) c.check_every = j["check_every"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j, std::move(base));
}

SeriesRun simulate(const RunSpec& spec, const RunBudget& budget, bool instrument,
                   std::uint64_t check_every) {
  SeriesRun out;
  out.spec = spec;
  EvolvingState state(spec.n, spec.alpha, spec.init, spec.seed);
  if (!instrument) {
    SorterMachine machine(spec.sorter, state);
    out.result = run_rounds(machine, state, budget, &out.round_good_swaps);
    return out;
  }

  InstrumentOptions opts;
  opts.sorter = spec.sorter;
  opts.check_every = check_every;
  opts.sample_every = budget.sample_every;
  InstrumentedRun run(std::move(state), opts);
  constexpr auto kNoLimit = std::numeric_limits<std::uint64_t>::max();
  if (!budget.steps && !budget.rounds) {
    throw std::invalid_argument("simulate: budget needs a step or round limit");
  }
  run.run(budget.rounds.value_or(kNoLimit), budget.steps.value_or(kNoLimit));
  out.result.rounds = run.rounds();
  const RoundRecord& cur = run.machine().current_round();
  if (cur.t_s < run.state().clock()) {
    RoundRecord partial = cur;
    partial.t_e = run.state().clock();
    partial.I_te = run.state().inversions();
    partial.complete = false;
    out.result.rounds.push_back(partial);
  }
  out.result.series = run.series();
  out.result.steps = run.stats().steps;
  out.result.good_swaps = run.good_swaps();
  out.round_good_swaps = run.round_good_swaps();
  out.instrument = run.stats();
  return out;
}

std::vector<RunSpec> expand_runs(const ExperimentConfig& c) {
  std::vector<RunSpec> specs;
  for (int n : c.n_list) {
    for (auto seed : c.seeds) specs.push_back({n, c.alpha, c.sorter, c.init, seed});
  }
  return specs;
}

std::vector<SeriesRun> run_sweep(const ExperimentConfig& c, Execution exec) {
  c.validate();
  const auto specs = expand_runs(c);
  return fan_out<SeriesRun>(
      specs.size(),
      [&](std::size_t k) {
        const RunSpec& s = specs[k];
        RunBudget b;
        b.steps = c.steps;
        b.rounds = c.rounds;
        if (!b.steps && !b.rounds) b.steps = 4 * static_cast<std::uint64_t>(s.n) * s.n;
        b.sample_every = c.sample_every_for(s.n);
        return simulate(s, b, c.instrument, c.check_every);
      },
      exec);
}

std::vector<std::optional<double>> good_swap_fraction(const std::vector<RoundRecord>& rounds,
                                                      const std::vector<std::uint64_t>& good,
                                                      int alpha) {
  std::vector<std::optional<double>> out;
  std::size_t k = 0;
  for (const auto& r : rounds) {
    if (!r.complete) continue;
    const std::uint64_t g = k < good.size() ? good[k] : 0;
    ++k;
    if (alpha == 0 || r.length() == 0) {
      out.emplace_back();
    } else {
      out.emplace_back(static_cast<double>(g) / static_cast<double>(r.length()));
    }
  }
  return out;
}

LowerBoundCheck round_length_lowerbound_check(const std::vector<RoundRecord>& rounds, int n,
                                              double c) {
  LowerBoundCheck r;
  r.c = c;
  r.min_start_inversions = (12 * c * c + 2 * c) * n;
  for (const auto& round : rounds) {
    if (!round.complete || !round.insertion) continue;
    if (static_cast<double>(round.I_ts) < r.min_start_inversions) continue;
    ++r.eligible;
    if (static_cast<double>(round.length()) < c * n) ++r.violations;
  }
  return r;
}

SteadyStateSummary summarize_steady_state(const std::vector<SeriesRun>& runs,
                                          const ExperimentConfig& c) {
  std::map<int, std::vector<double>> by_n;
  for (const auto& run : runs) {
    auto& samples = by_n[run.spec.n];
    const std::uint64_t burn = c.burn_in_for(run.spec.n);
    for (const auto& rec : run.result.series) {
      if (rec.t >= burn) samples.push_back(static_cast<double>(rec.I));
    }
  }
  SteadyStateSummary s;
  s.tolerance = c.scaling_tolerance;
  for (auto& [n, samples] : by_n) {
    SteadyStateRow row;
    row.n = n;
    row.samples = samples.size();
    if (!samples.empty()) {
      double total = 0;
      for (double v : samples) total += v;
      row.mean_I = total / static_cast<double>(samples.size());
      row.max_I = *std::max_element(samples.begin(), samples.end());
      row.median_I = median_of(samples);
    }
    row.median_ratio = row.median_I / n;
    s.rows.push_back(row);
  }
  for (std::size_t k = 1; k < s.rows.size(); ++k) {
    const double prev = s.rows[k - 1].median_ratio;
    const double cur = s.rows[k].median_ratio;
    double change = 0;
    if (prev > 0) {
      change = std::abs(cur - prev) / prev;
    } else if (cur > 0) {
      change = std::numeric_limits<double>::infinity();
    }
    s.relative_changes.push_back(change);
    s.max_relative_change = std::max(s.max_relative_change, change);
  }
  s.scaling_ok = s.max_relative_change < s.tolerance;
  return s;
}

SteadyStateSummary steady_state_summary(const ExperimentConfig& c, Execution exec) {
  return summarize_steady_state(run_sweep(c, exec), c);
}

std::optional<std::uint64_t> hitting_time(const RunSpec& spec, double threshold,
                                          std::uint64_t max_steps) {
  EvolvingState state(spec.n, spec.alpha, spec.init, spec.seed);
  SorterMachine machine(spec.sorter, state);
  if (static_cast<double>(state.inversions()) <= threshold) return state.clock();
  for (std::uint64_t k = 0; k < max_steps; ++k) {
    machine.advance(state);
    if (static_cast<double>(state.inversions()) <= threshold) return state.clock();
  }
  return std::nullopt;
}

ConvergenceSummary summarize_convergence(std::vector<HittingTime> runs, double beta) {
  ConvergenceSummary s;
  s.beta = beta;
  std::map<int, std::vector<const HittingTime*>> by_n;
  for (const auto& h : runs) by_n[h.n].push_back(&h);
  std::vector<double> per_nlogn, per_n2;
  for (const auto& [n, hs] : by_n) {
    ConvergenceRow row;
    row.n = n;
    std::vector<double> ts, a, b;
    const double nlogn = n * std::log2(static_cast<double>(n));
    const double n2 = static_cast<double>(n) * n;
    for (const HittingTime* h : hs) {
      if (!h->t) {
        ++row.censored;
        continue;
      }
      ++row.hits;
      ts.push_back(static_cast<double>(*h->t));
      a.push_back(static_cast<double>(*h->t) / nlogn);
      b.push_back(static_cast<double>(*h->t) / n2);
    }
    row.median_t = median_of(ts);
    row.median_per_nlogn = median_of(a);
    row.median_per_n2 = median_of(b);
    s.censored += row.censored;
    per_nlogn.push_back(row.median_per_nlogn);
    per_n2.push_back(row.median_per_n2);
    s.rows.push_back(row);
  }
  s.spread_nlogn = spread(per_nlogn);
  s.spread_n2 = spread(per_n2);
  s.runs = std::move(runs);
  return s;
}

ConvergenceSummary convergence_time(const ExperimentConfig& c, double beta, Execution exec) {
  c.validate();
  const auto specs = expand_runs(c);
  auto hits = fan_out<HittingTime>(
      specs.size(),
      [&](std::size_t k) {
        const RunSpec& s = specs[k];
        const std::uint64_t budget = c.steps.value_or(16 * static_cast<std::uint64_t>(s.n) * s.n);
        return HittingTime{s.n, s.seed, hitting_time(s, beta * s.n, budget)};
      },
      exec);
  return summarize_convergence(std::move(hits), beta);
}

void RoundAudit::merge(const RoundAudit& o) {
  rounds += o.rounds;
  identity_violations += o.identity_violations;
  length_violations += o.length_violations;
  drift_violations += o.drift_violations;
  max_drift = std::max(max_drift, o.max_drift);
  if (first_violation.empty()) first_violation = o.first_violation;
}

RoundAudit audit_rounds(const RunSpec& spec, std::uint64_t min_rounds, std::uint64_t max_steps) {
  if (spec.sorter == SorterKind::repeated_quicksort) {
    throw ContractViolation("audit_rounds: the quicksort baseline has no insertion rounds");
  }
  EvolvingState state(spec.n, spec.alpha, spec.init, spec.seed);
  SorterMachine machine(spec.sorter, state);
  const std::int64_t n = spec.n;
  RoundAudit a;
  const auto note = [&](const std::string& what) {
    if (!a.first_violation.empty()) return;
    std::ostringstream msg;
    msg << "n=" << spec.n << " alpha=" << spec.alpha << " seed=" << spec.seed << " round "
        << a.rounds + 1 << ": " << what;
    a.first_violation = msg.str();
  };

  std::uint64_t t_s = state.clock();
  std::int64_t I_ts = state.inversions();
  std::int64_t fixes = 0;
  for (std::uint64_t k = 0; k < max_steps && a.rounds < min_rounds; ++k) {
    const bool in_round = machine.phase() == Phase::insertion_rounds;
    const StepOutcome out = machine.advance(state);
    if (in_round) {
      if (state.last_step().sort_swap_applied) ++fixes;
      const std::int64_t drift = state.inversions() - I_ts;
      a.max_drift = std::max(a.max_drift, drift);
      if (drift > n - 1) {
        ++a.drift_violations;
        note("drift " + std::to_string(drift) + " exceeds n-1");
      }
    }
    if (out == StepOutcome::round_completed) {
      const auto len = static_cast<std::int64_t>(state.clock() - t_s);
      if (len != fixes + n - 1 || machine.last_completed()->F != fixes) {
        ++a.identity_violations;
        note("length " + std::to_string(len) + " != F + n - 1 with F=" + std::to_string(fixes));
      }
      if (2 * len > (n - 1) * (n + 2)) {
        ++a.length_violations;
        note("length " + std::to_string(len) + " above n(n-1)/2 + n - 1");
      }
      ++a.rounds;
    }
    if (out == StepOutcome::round_completed || out == StepOutcome::prelude_completed) {
      t_s = state.clock();
      I_ts = state.inversions();
      fixes = 0;
    }
  }
  return a;
}

LemmaCheckSummary lemma_checks(const ExperimentConfig& c, Execution exec) {
  c.validate();
  if (c.alpha != 1) throw ConfigError("lemma checks need alpha == 1");
  const auto specs = expand_runs(c);
  const std::uint64_t rounds = c.rounds.value_or(5);
  auto stats = fan_out<InstrumentStats>(
      specs.size(),
      [&](std::size_t k) {
        const RunSpec& s = specs[k];
        InstrumentOptions opts;
        opts.sorter = s.sorter;
        opts.check_every = c.check_every;
        InstrumentedRun run(EvolvingState(s.n, s.alpha, s.init, s.seed), opts);
        // A round takes fewer than n^2/2 steps, plus the prelude if any.
        const std::uint64_t nn = static_cast<std::uint64_t>(s.n) * s.n;
        run.run(rounds, c.steps.value_or((rounds + 1) * nn));
        return run.stats();
      },
      exec);
  LemmaCheckSummary out;
  out.runs = specs.size();
  for (const auto& s : stats) out.stats.merge(s);
  return out;
}

BallsBinsSummary balls_bins_preset(int n, const ExperimentConfig& c, Execution exec) {
  c.validate();
  BallsBinsSummary s;
  const std::uint64_t seed = c.seeds.front();
  s.none = balls_and_bins_trial(n, c.c, c.trials, ForbiddenBinPolicy::none, seed, exec);
  s.adversarial =
      balls_and_bins_trial(n, c.c, c.trials, ForbiddenBinPolicy::adversarial_lowest, seed, exec);
  return s;
}

ordered_json to_json(const SteadyStateSummary& s) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : s.rows) {
    rows.push_back({{"n", r.n},
                    {"samples", r.samples},
                    {"mean_I", r.mean_I},
                    {"median_I", r.median_I},
                    {"max_I", r.max_I},
                    {"median_I_over_n", r.median_ratio}});
  }
  return {{"rows", rows},
          {"relative_changes", s.relative_changes},
          {"max_relative_change", s.max_relative_change},
          {"tolerance", s.tolerance},
          {"scaling_ok", s.scaling_ok}};
}

ordered_json to_json(const ConvergenceSummary& s) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : s.rows) {
    rows.push_back({{"n", r.n},
                    {"hits", r.hits},
                    {"censored", r.censored},
                    {"median_t", r.median_t},
                    {"median_t_over_nlog2n", r.median_per_nlogn},
                    {"median_t_over_n2", r.median_per_n2}});
  }
  ordered_json runs = ordered_json::array();
  for (const auto& h : s.runs) {
    runs.push_back({{"n", h.n}, {"seed", h.seed}, {"t", opt(h.t)}, {"censored", !h.t}});
  }
  return {{"beta", s.beta},         {"rows", rows},         {"spread_nlog2n", s.spread_nlogn},
          {"spread_n2", s.spread_n2}, {"censored", s.censored}, {"runs", runs}};
}

ordered_json to_json(const InstrumentStats& s) {
  ordered_json j;
  j["steps"] = s.steps;
  j["rounds"] = s.rounds;
  j["random_swaps"] = s.swaps;
  j["round_identity_violations"] = s.round_identity_violations;
  j["round_length_violations"] = s.round_length_violations;
  j["drift_violations"] = s.drift_violations;
  j["invariant1"] = {{"checks", s.invariant1_checks}, {"violations", s.invariant1_violations}};
  j["invariant2"] = {{"checks", s.invariant2_checks}, {"violations", s.invariant2_violations}};
  j["invariant2_without_invariant1"] = s.implication_violations;
  j["sort_substep_B"] = {{"checks", s.sort_b_checks}, {"violations", s.sort_b_violations}};
  j["B_vs_frozen_inversions_violations"] = s.b_identity_violations;
  j["width_bound_violations"] = s.width_bound_violations;
  j["triangle_violations"] = s.triangle_violations;
  j["lemma6"] = {{"checks", s.lemma6_checks}, {"violations", s.lemma6_violations}};
  j["lemma7"] = {{"checks", s.lemma7_checks}, {"violations", s.lemma7_violations}};
  j["replay"] = {{"checks", s.replay_checks}, {"mismatches", s.replay_mismatches}};
  j["blame_anomalies"] = s.blame_anomalies;
  j["unexplained_pairing_changes"] = s.unexplained_pairings;
  j["swap_cases"] = s.swap_cases;
  j["hard_violations"] = s.hard_violations();
  j["dumps"] = s.dumps;
  return j;
}

ordered_json to_json(const RoundAudit& a) {
  return {{"rounds", a.rounds},
          {"identity_violations", a.identity_violations},
          {"length_violations", a.length_violations},
          {"drift_violations", a.drift_violations},
          {"max_drift", a.max_drift},
          {"first_violation", a.first_violation}};
}

ordered_json to_json(const BallsBinsResult& r) {
  return {{"policy", std::string(to_string(r.policy))},
          {"n", r.n},
          {"c", r.c},
          {"seed", r.seed},
          {"balls", r.balls},
          {"trials", r.sums.size()},
          {"max_sum_of_squares", r.max_sum},
          {"threshold_3c2n", r.threshold},
          {"trials_exceeding", r.exceeding}};
}

ordered_json to_json(const LemmaCheckSummary& s) {
  ordered_json j = to_json(s.stats);
  j["runs"] = s.runs;
  return j;
}

}  // namespace evo
