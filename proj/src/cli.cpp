#include "evo/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "evo/experiments.hpp"
#include "evo/series_io.hpp"
#include "evo/verify.hpp"

namespace evo {

using nlohmann::ordered_json;

namespace {

struct Flags {
  CLI::App* sub = nullptr;
  int n = 0;
  std::vector<int> n_list;
  int alpha = 0;
  std::string sorter;
  std::string init;
  std::uint64_t steps = 0;
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
  int seeds = 0;
  std::uint64_t sample_every = 0;
  std::uint64_t burn_in = 0;
  bool instrument = false;
  std::string config;
  std::string out;
  double c = 0;
  std::int64_t trials = 0;
  double beta = 0;
};

void add_flags(CLI::App* sub, Flags& f) {
  f.sub = sub;
  sub->add_option("--n", f.n, "list size");
  sub->add_option("--n-list", f.n_list, "list sizes for a sweep")->delimiter(',');
  sub->add_option("--alpha", f.alpha, "random swaps per comparison");
  sub->add_option("--sorter", f.sorter,
                  "repeated-insertion | quick-then-insertion | repeated-quicksort");
  sub->add_option("--init", f.init, "identity | reversed | uniform_random");
  sub->add_option("--steps", f.steps, "step budget per run");
  sub->add_option("--rounds", f.rounds, "round budget per run");
  sub->add_option("--seed", f.seed, "first seed");
  sub->add_option("--seeds", f.seeds, "number of consecutive seeds starting at --seed");
  sub->add_option("--sample-every", f.sample_every, "time-series sampling interval");
  sub->add_option("--burn-in", f.burn_in, "steps discarded before steady-state sampling");
  sub->add_flag("--instrument", f.instrument, "attach the frozen-state analysis");
  sub->add_option("--config", f.config, "JSON config file; flags override its values");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--c", f.c, "balls-and-bins multiplier");
  sub->add_option("--trials", f.trials, "balls-and-bins trials per policy");
  sub->add_option("--beta", f.beta, "convergence threshold: I <= beta n");
}

bool given(const Flags& f, const char* name) { return f.sub->count(name) > 0; }

/// Config file first, then the flags actually present on the command line.
ExperimentConfig overlay(const Flags& f, ExperimentConfig c) {
  if (given(f, "--n")) c.n_list = {f.n};
  if (given(f, "--n-list")) c.n_list = f.n_list;
  if (given(f, "--alpha")) c.alpha = f.alpha;
  if (given(f, "--sorter")) c.sorter = parse_sorter_kind(f.sorter);
  if (given(f, "--init")) c.init = parse_init_policy(f.init);
  if (given(f, "--steps")) c.steps = f.steps;
  if (given(f, "--rounds")) c.rounds = f.rounds;
  if (given(f, "--seed") || given(f, "--seeds")) {
    const std::uint64_t first = given(f, "--seed") ? f.seed : c.seeds.front();
    const int count = given(f, "--seeds") ? f.seeds : 1;
    c.seeds.clear();
    for (int k = 0; k < count; ++k) c.seeds.push_back(first + static_cast<std::uint64_t>(k));
  }
  if (given(f, "--sample-every")) c.sample_every = f.sample_every;
  if (given(f, "--burn-in")) c.burn_in = f.burn_in;
  if (given(f, "--instrument")) c.instrument = f.instrument;
  if (given(f, "--out")) c.out = f.out;
  if (given(f, "--c")) c.c = f.c;
  if (given(f, "--trials")) c.trials = f.trials;
  if (given(f, "--beta")) c.beta = f.beta;
  return c;
}

ordered_json envelope(const ExperimentConfig& c) {
  ordered_json j;
  j["config"] = to_json(c);
  j["seeds"] = c.seeds;
  return j;
}

void prepare_out(const ExperimentConfig& c) {
  if (c.out.empty()) return;
  ensure_directory(c.out);
  const auto probe = std::filesystem::path(c.out) / ".write_probe";
  {
    std::ofstream test(probe);
    if (!test) throw OutputError("output directory " + c.out + " is not writable");
  }
  std::filesystem::remove(probe);
}

std::string out_path(const ExperimentConfig& c, const std::string& name) {
  return (std::filesystem::path(c.out) / name).string();
}

int cmd_simulate(const ExperimentConfig& c, std::ostream& out) {
  const auto runs = run_sweep(c);
  ordered_json summary = envelope(c);
  ordered_json rows = ordered_json::array();
  std::uint64_t violations = 0;
  out << "n      seed        steps      rounds  final_I   good_swaps  violations\n";
  for (const auto& run : runs) {
    std::uint64_t identity = 0, length = 0, drift = 0, complete = 0;
    for (const auto& r : run.result.rounds) {
      if (!r.complete || !r.insertion) continue;
      ++complete;
      const RoundCheck rc = check_round(r, run.spec.n);
      identity += !rc.length_identity;
      length += !rc.length_bound;
      // The drift bound is only claimed for at most one random swap per step.
      if (run.spec.alpha <= 1) drift += !rc.drift_bound;
    }
    std::uint64_t run_violations = identity + length + drift;
    if (run.instrument) run_violations += run.instrument->hard_violations();
    violations += run_violations;

    const std::int64_t final_I =
        run.result.series.empty() ? -1 : run.result.series.back().I;
    ordered_json row;
    row["n"] = run.spec.n;
    row["seed"] = run.spec.seed;
    row["steps"] = run.result.steps;
    row["completed_rounds"] = complete;
    row["last_sampled_I"] = final_I;
    row["good_swaps"] = run.result.good_swaps;
    row["round_identity_violations"] = identity;
    row["round_length_violations"] = length;
    row["drift_violations"] = drift;
    const auto fractions = good_swap_fraction(run.result.rounds, run.round_good_swaps, run.spec.alpha);
    ordered_json frac = ordered_json::array();
    for (const auto& f : fractions) frac.push_back(f ? ordered_json(*f) : ordered_json(nullptr));
    row["good_swap_fraction_per_round"] = frac;
    const auto lb = round_length_lowerbound_check(run.result.rounds, run.spec.n, c.round_length_c);
    row["round_length_lower_bound"] = {{"c", lb.c},
                                       {"min_start_inversions", lb.min_start_inversions},
                                       {"eligible", lb.eligible},
                                       {"violations", lb.violations}};
    if (run.instrument) row["instrument"] = to_json(*run.instrument);
    std::string csv;
    if (!c.out.empty()) {
      csv = "series_n" + std::to_string(run.spec.n) + "_seed" + std::to_string(run.spec.seed) +
            ".csv";
      write_series_csv(out_path(c, csv), run.result.series);
      row["series_csv"] = csv;
    }
    rows.push_back(row);
    out << std::left << std::setw(7) << run.spec.n << std::setw(12) << run.spec.seed
        << std::setw(11) << run.result.steps << std::setw(8) << complete << std::setw(10)
        << final_I << std::setw(12) << run.result.good_swaps << run_violations << "\n";
  }
  summary["runs"] = rows;
  summary["violations"] = violations;
  if (!c.out.empty()) write_json(out_path(c, "summary.json"), summary);
  out << "violations: " << violations << "\n";
  return violations == 0 ? 0 : 1;
}

int cmd_steady_state(const ExperimentConfig& c, std::ostream& out) {
  const SteadyStateSummary s = steady_state_summary(c);
  out << "n       samples   mean_I      median_I    max_I       median_I/n\n";
  for (const auto& r : s.rows) {
    out << std::left << std::setw(8) << r.n << std::setw(10) << r.samples << std::setw(12)
        << r.mean_I << std::setw(12) << r.median_I << std::setw(12) << r.max_I
        << r.median_ratio << "\n";
  }
  out << "max relative change of median I/n between consecutive n: " << s.max_relative_change
      << " (tolerance " << s.tolerance << ", " << (s.scaling_ok ? "stable" : "not stable")
      << ")\n";
  if (!c.out.empty()) {
    ordered_json j = envelope(c);
    j["steady_state"] = to_json(s);
    write_json(out_path(c, "summary.json"), j);
  }
  return 0;
}

int cmd_convergence(const ExperimentConfig& c, std::ostream& out) {
  double beta = 0;
  if (c.beta) {
    beta = *c.beta;
  } else {
    // Default threshold: a margin above the steady state measured with
    // repeated insertion from random starts on the same sweep.
    ExperimentConfig steady = c;
    steady.sorter = SorterKind::repeated_insertion;
    steady.init = InitPolicy::uniform_random;
    steady.steps.reset();
    steady.rounds.reset();
    steady.burn_in.reset();
    steady.sample_every.reset();
    const SteadyStateSummary s = steady_state_summary(steady);
    double max_ratio = 0;
    for (const auto& r : s.rows) max_ratio = std::max(max_ratio, r.median_ratio);
    beta = c.beta_margin * max_ratio;
    if (!(beta > 0)) beta = 1;
  }
  const ConvergenceSummary s = convergence_time(c, beta);
  out << "beta " << beta << "\n";
  out << "n       hits  censored  median_t     t/(n log2 n)  t/n^2\n";
  for (const auto& r : s.rows) {
    out << std::left << std::setw(8) << r.n << std::setw(6) << r.hits << std::setw(10)
        << r.censored << std::setw(13) << r.median_t << std::setw(14) << r.median_per_nlogn
        << r.median_per_n2 << "\n";
  }
  out << "spread t/(n log2 n): " << s.spread_nlogn << ", spread t/n^2: " << s.spread_n2
      << ", censored: " << s.censored << "\n";
  if (!c.out.empty()) {
    ordered_json j = envelope(c);
    j["convergence"] = to_json(s);
    write_json(out_path(c, "summary.json"), j);
  }
  return 0;
}

int cmd_lemma_checks(ExperimentConfig c, std::ostream& out) {
  const LemmaCheckSummary s = lemma_checks(c);
  const InstrumentStats& st = s.stats;
  out << "runs " << s.runs << ", rounds " << st.rounds << ", steps " << st.steps
      << ", random swaps " << st.swaps << "\n"
      << "round identity / length / drift violations: " << st.round_identity_violations
      << " / " << st.round_length_violations << " / " << st.drift_violations << "\n"
      << "invariant 1 violations: " << st.invariant1_violations << " of "
      << st.invariant1_checks << "\n"
      << "invariant 2 violations: " << st.invariant2_violations << " of "
      << st.invariant2_checks << "\n"
      << "B changed by a sort sub-step: " << st.sort_b_violations << " of " << st.sort_b_checks
      << "\n"
      << "S bound violations: " << st.lemma6_violations << " of " << st.lemma6_checks << "\n"
      << "B <= 4 kappa violations: " << st.lemma7_violations << " of " << st.lemma7_checks
      << "\n"
      << "freeze vs replay mismatches: " << st.replay_mismatches << " of " << st.replay_checks
      << "\n"
      << "B above width bound: " << st.width_bound_violations
      << ", triangle violations: " << st.triangle_violations << "\n"
      << "blame anomalies (informational): " << st.blame_anomalies
      << ", unexplained pairing changes: " << st.unexplained_pairings << "\n"
      << "violations: " << st.hard_violations() << "\n";
  for (const auto& d : st.dumps) out << "dump: " << d << "\n";
  if (!c.out.empty()) {
    ordered_json j = envelope(c);
    j["lemma_checks"] = to_json(s);
    write_json(out_path(c, "summary.json"), j);
  }
  return st.hard_violations() == 0 ? 0 : 1;
}

int cmd_balls_bins(const ExperimentConfig& c, std::ostream& out) {
  const int n = c.n_list.front();
  const BallsBinsSummary s = balls_bins_preset(n, c);
  const bool guaranteed = c.c > std::exp(1.0);
  out << "n " << n << ", c " << c.c << ", balls " << s.none.balls << ", trials " << c.trials
      << "\n"
      << "threshold 3c^2n: " << s.none.threshold << "\n"
      << "max sum of squares, policy none: " << s.none.max_sum << " (" << s.none.exceeding
      << " trials above threshold)\n"
      << "max sum of squares, policy adversarial_lowest: " << s.adversarial.max_sum << " ("
      << s.adversarial.exceeding << " trials above threshold)\n";
  if (!guaranteed) out << "c <= e: the bound is reported without the guarantee\n";
  if (!c.out.empty()) {
    ordered_json j = envelope(c);
    j["none"] = to_json(s.none);
    j["adversarial_lowest"] = to_json(s.adversarial);
    j["guaranteed"] = guaranteed;
    write_json(out_path(c, "summary.json"), j);
  }
  const bool exceeded = s.none.exceeding + s.adversarial.exceeding > 0;
  return guaranteed && exceeded ? 1 : 0;
}

int cmd_verify_all(const ExperimentConfig& c, std::ostream& out) {
  VerifySettings settings;
  const auto results = verify_all(settings);
  bool ok = true;
  ordered_json list = ordered_json::array();
  for (const auto& r : results) {
    out << format_result(r) << "\n" << std::flush;
    ok = ok && r.passed;
    list.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"data", r.data}});
  }
  out << (ok ? "all criteria passed" : "some criteria failed") << "\n";
  if (!c.out.empty()) {
    ordered_json j;
    j["seed"] = settings.seed;
    j["criteria"] = list;
    write_json(out_path(c, "verify.json"), j);
  }
  return ok ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sorting under evolving data: simulations and analysis checks", "evo"};
  app.require_subcommand(1);
  struct Command {
    const char* name;
    const char* help;
    Flags flags;
  };
  std::vector<Command> commands = {
      {"simulate", "run sorters and write per-run time series", {}},
      {"steady-state", "steady-state inversion statistics over an n sweep", {}},
      {"convergence", "hitting time of I <= beta n per seed", {}},
      {"lemma-checks", "instrumented runs checking every analysis bound", {}},
      {"balls-bins", "balls-and-bins sum-of-squares trials", {}},
      {"verify-all", "run the full acceptance suite with pinned seeds", {}},
  };
  for (auto& cmd : commands) add_flags(app.add_subcommand(cmd.name, cmd.help), cmd.flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const Command* chosen = nullptr;
  for (const auto& cmd : commands) {
    if (cmd.flags.sub->parsed()) chosen = &cmd;
  }
  const Flags& f = chosen->flags;
  const std::string name = chosen->name;

  ExperimentConfig config;
  if (name == "lemma-checks") {
    config.n_list = {32};
    config.seeds = {1, 2, 3, 4, 5};
  }
  if (name == "balls-bins") config.n_list = {10000};
  if (name == "steady-state" || name == "convergence") {
    config.n_list = {128, 256, 512, 1024};
    config.seeds.clear();
    for (std::uint64_t s = 1; s <= 20; ++s) config.seeds.push_back(s);
  }
  if (name == "convergence") config.init = InitPolicy::reversed;
  config.preset = name;

  if (!f.config.empty()) {
    try {
      config = load_config(f.config, config);
      config.validate();
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << "\n";
      return kExitConfig;
    }
  }
  try {
    config = overlay(f, config);
    config.preset = name;
    config.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    prepare_out(config);
    if (name == "simulate") return cmd_simulate(config, out);
    if (name == "steady-state") return cmd_steady_state(config, out);
    if (name == "convergence") return cmd_convergence(config, out);
    if (name == "lemma-checks") return cmd_lemma_checks(config, out);
    if (name == "balls-bins") return cmd_balls_bins(config, out);
    return cmd_verify_all(config, out);
  } catch (const OutputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitOutput;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace evo
