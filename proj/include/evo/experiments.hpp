#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "evo/balls_bins.hpp"
#include "evo/instrumented_run.hpp"
#include "evo/parallel.hpp"
#include "evo/sorter.hpp"

namespace evo {

/// Raised for malformed or unreadable experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything an experiment preset needs. Absent optionals fall back to
/// per-preset defaults that depend on n (see the accessors below).
struct ExperimentConfig {
  std::string preset = "simulate";
  std::vector<int> n_list{64};
  int alpha = 1;
  SorterKind sorter = SorterKind::repeated_insertion;
  InitPolicy init = InitPolicy::uniform_random;
  std::vector<std::uint64_t> seeds{1};
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> rounds;
  std::optional<std::uint64_t> sample_every;
  std::optional<std::uint64_t> burn_in;
  bool instrument = false;
  std::string out;

  // Analysis constants and acceptance thresholds.
  double c = 3.0;                      // balls-and-bins multiplier
  std::int64_t trials = 1000;          // balls-and-bins trials per policy
  std::optional<double> beta;          // convergence threshold I <= beta n
  double epsilon = 3.0 / 20000.0;      // good-swap fraction floor
  double round_length_c = 0.25;        // round length lower-bound multiplier
  double scaling_tolerance = 0.5;      // max relative change of median I/n between consecutive n
  double ratio_factor = 3.0;           // max/min spread allowed for normalized hitting times
  double beta_margin = 2.0;            // beta = margin * observed steady-state I/n
  std::uint64_t check_every = 5;       // instrumented Lemma 6/7 cadence

  void validate() const;

  /// Steps discarded before steady-state sampling: 2n^2 for repeated
  /// insertion and the quicksort baseline, 8 n log2 n with a quicksort prelude.
  std::uint64_t burn_in_for(int n) const;
  std::uint64_t sample_every_for(int n) const;
};

std::string_view to_string(InitPolicy p);
InitPolicy parse_init_policy(std::string_view text);

nlohmann::ordered_json to_json(const ExperimentConfig& c);
/// Overlays the keys present in `j` onto `base`. Unknown keys are errors.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});
/// Reads a JSON config file over `base`. Throws ConfigError if unreadable or
/// malformed.
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// One simulated run.
struct RunSpec {
  int n = 0;
  int alpha = 1;
  SorterKind sorter = SorterKind::repeated_insertion;
  InitPolicy init = InitPolicy::uniform_random;
  std::uint64_t seed = 0;
};

struct SeriesRun {
  RunSpec spec;
  RunResult result;
  std::vector<std::uint64_t> round_good_swaps;
  std::optional<InstrumentStats> instrument;
};

SeriesRun simulate(const RunSpec& spec, const RunBudget& budget, bool instrument = false,
                   std::uint64_t check_every = 5);

/// Runs f(0..count-1) on independent workers and returns the results in index
/// order, so the output does not depend on scheduling. The first exception
/// thrown by any task is rethrown.
template <typename T, typename F>
std::vector<T> fan_out(std::size_t count, F&& f, Execution exec) {
  std::vector<T> out(count);
  std::vector<std::exception_ptr> errors(count);
  const auto body = [&](std::int64_t k) {
    try {
      out[k] = f(static_cast<std::size_t>(k));
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  const auto total = static_cast<std::int64_t>(count);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < total; ++k) body(k);
  } else {
    for (std::int64_t k = 0; k < total; ++k) body(k);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

/// Every (n, seed) combination of the config, n-major.
std::vector<RunSpec> expand_runs(const ExperimentConfig& c);
/// Runs every combination with the config's budget.
std::vector<SeriesRun> run_sweep(const ExperimentConfig& c, Execution exec = Execution::parallel);

// --- estimators: pure functions of recorded runs ---

/// Per completed round, good random swaps divided by round length. Absent
/// for alpha == 0 and for incomplete or empty rounds.
std::vector<std::optional<double>> good_swap_fraction(const std::vector<RoundRecord>& rounds,
                                                      const std::vector<std::uint64_t>& good,
                                                      int alpha);

struct LowerBoundCheck {
  double c = 0;
  double min_start_inversions = 0;  // (12c^2 + 2c) n
  std::int64_t eligible = 0;
  std::int64_t violations = 0;  // eligible rounds shorter than c n
};
LowerBoundCheck round_length_lowerbound_check(const std::vector<RoundRecord>& rounds, int n,
                                              double c);

struct SteadyStateRow {
  int n = 0;
  std::size_t samples = 0;
  double mean_I = 0;
  double median_I = 0;
  double max_I = 0;
  double median_ratio = 0;  // median I / n
};
struct SteadyStateSummary {
  std::vector<SteadyStateRow> rows;      // ascending n
  std::vector<double> relative_changes;  // |r_{k+1} - r_k| / r_k of median I/n
  double max_relative_change = 0;
  double tolerance = 0;
  bool scaling_ok = true;
};
/// Pools the samples taken at or after each run's burn-in, per n.
SteadyStateSummary summarize_steady_state(const std::vector<SeriesRun>& runs,
                                          const ExperimentConfig& c);
SteadyStateSummary steady_state_summary(const ExperimentConfig& c,
                                        Execution exec = Execution::parallel);

struct HittingTime {
  int n = 0;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> t;  // absent when censored
};
struct ConvergenceRow {
  int n = 0;
  std::size_t hits = 0;
  std::size_t censored = 0;
  double median_t = 0;
  double median_per_nlogn = 0;  // median of t / (n log2 n)
  double median_per_n2 = 0;     // median of t / n^2
};
struct ConvergenceSummary {
  double beta = 0;
  std::vector<HittingTime> runs;
  std::vector<ConvergenceRow> rows;
  double spread_nlogn = 0;  // max/min of median_per_nlogn across n
  double spread_n2 = 0;
  std::size_t censored = 0;
};
/// First clock value with I <= threshold (checked at t = 0 and after every
/// step), or nothing if `max_steps` elapse first.
std::optional<std::uint64_t> hitting_time(const RunSpec& spec, double threshold,
                                          std::uint64_t max_steps);
ConvergenceSummary summarize_convergence(std::vector<HittingTime> runs, double beta);
ConvergenceSummary convergence_time(const ExperimentConfig& c, double beta,
                                    Execution exec = Execution::parallel);

/// Independent audit of per-round bookkeeping: F is recounted from the step
/// logs and the drift I_t - I_ts is checked after every step.
struct RoundAudit {
  std::uint64_t rounds = 0;
  std::uint64_t identity_violations = 0;
  std::uint64_t length_violations = 0;
  std::uint64_t drift_violations = 0;
  std::int64_t max_drift = 0;
  std::string first_violation;

  void merge(const RoundAudit& o);
};
RoundAudit audit_rounds(const RunSpec& spec, std::uint64_t min_rounds, std::uint64_t max_steps);

struct LemmaCheckSummary {
  InstrumentStats stats;
  std::uint64_t runs = 0;
};
/// Instrumented runs over every (n, seed) in the config; alpha must be 1.
LemmaCheckSummary lemma_checks(const ExperimentConfig& c, Execution exec = Execution::parallel);

struct BallsBinsSummary {
  BallsBinsResult none;
  BallsBinsResult adversarial;
};
BallsBinsSummary balls_bins_preset(int n, const ExperimentConfig& c,
                                   Execution exec = Execution::parallel);

nlohmann::ordered_json to_json(const SteadyStateSummary& s);
nlohmann::ordered_json to_json(const ConvergenceSummary& s);
nlohmann::ordered_json to_json(const InstrumentStats& s);
nlohmann::ordered_json to_json(const RoundAudit& a);
nlohmann::ordered_json to_json(const BallsBinsResult& r);
nlohmann::ordered_json to_json(const LemmaCheckSummary& s);

}  // namespace evo
