#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "evo/experiments.hpp"

namespace evo {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;  // one line, human readable
  nlohmann::ordered_json data;
  double seconds = 0;
};

/// Sizes, seeds and thresholds of the acceptance suite. The defaults are the
/// pinned acceptance values; tests shrink them for smoke runs.
struct VerifySettings {
  std::uint64_t seed = 20240601;
  Execution exec = Execution::parallel;

  // Round bookkeeping.
  std::vector<int> round_n{16, 64, 256};
  std::vector<int> round_alpha{0, 1, 2};
  int round_runs = 200;
  std::uint64_t round_min_rounds = 10;

  // Inversion-counter fuzzing.
  std::int64_t fuzz_cases = 100000;
  int fuzz_max_n = 64;
  int fuzz_ops = 8;

  // Instrumented analysis.
  std::vector<int> lemma_n{8, 16, 32};
  int lemma_seeds = 100;
  std::uint64_t lemma_rounds = 10;
  std::uint64_t check_every = 5;

  // Balls and bins.
  int bins_n = 10000;
  double bins_c = 3.0;
  std::int64_t bins_trials = 1000;

  // Scaling sweeps.
  std::vector<int> sweep_n{128, 256, 512, 1024};
  int sweep_seeds = 20;
  double scaling_tolerance = 0.5;
  double ratio_factor = 3.0;
  double beta_margin = 2.0;

  // Good-swap fraction.
  int fraction_n = 512;
  int fraction_seeds = 50;
  double epsilon = 3.0 / 20000.0;

  // Degenerate model.
  std::vector<int> degenerate_n{2, 3, 8, 64, 256};
  int degenerate_seeds = 20;
};

/// Shared state between criteria: criterion 8 takes its threshold from the
/// steady state measured by criterion 7, and 4/5 share one instrumented sweep.
struct VerifyContext {
  std::optional<double> beta;
  std::optional<LemmaCheckSummary> lemma;
};

CriterionResult verify_round_identity(const VerifySettings& s);    // 1
CriterionResult verify_round_drift(const VerifySettings& s);       // 2
CriterionResult verify_inversion_oracle(const VerifySettings& s);  // 3
CriterionResult verify_invariants(const VerifySettings& s, VerifyContext& ctx);   // 4
CriterionResult verify_lemma_bounds(const VerifySettings& s, VerifyContext& ctx); // 5
CriterionResult verify_balls_bins(const VerifySettings& s);        // 6
CriterionResult verify_steady_state(const VerifySettings& s, VerifyContext& ctx); // 7
CriterionResult verify_convergence(const VerifySettings& s, VerifyContext& ctx);  // 8
CriterionResult verify_good_swap_fraction(const VerifySettings& s);               // 9
CriterionResult verify_degenerate(const VerifySettings& s);                       // 10

/// Runs every criterion in order.
std::vector<CriterionResult> verify_all(const VerifySettings& s);

/// "PASS  3  title  (detail) [1.2s]"
std::string format_result(const CriterionResult& r);

/// Seeded fuzz of the inversion counter: `ops` random protocol operations on
/// a state with random n in [2, max_n]; after each one the incremental count
/// is compared with a brute-force recount. Returns the number of mismatches
/// and counts checkpoints into `checkpoints`.
std::int64_t fuzz_inversion_counter(std::uint64_t seed, int max_n, int ops,
                                    std::int64_t* checkpoints = nullptr);

}  // namespace evo
