#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "evo/parallel.hpp"
#include "evo/rng.hpp"

namespace evo {

enum class ForbiddenBinPolicy {
  none,
  /// Before each throw, forbid the bin holding the fewest balls (lowest index
  /// on ties) and throw uniformly into the rest.
  adversarial_lowest,
};
std::string_view to_string(ForbiddenBinPolicy p);
ForbiddenBinPolicy parse_forbidden_bin_policy(std::string_view text);

/// Number of balls thrown per trial: ceil(c * n).
std::int64_t ball_count(int n, double c);

/// One trial: throws ceil(c n) balls, returns the sum over bins of squared
/// occupancy.
std::int64_t balls_and_bins_once(int n, double c, ForbiddenBinPolicy policy, Rng& rng);

struct BallsBinsResult {
  int n = 0;
  double c = 0;
  ForbiddenBinPolicy policy = ForbiddenBinPolicy::none;
  std::uint64_t seed = 0;
  std::int64_t balls = 0;
  std::vector<std::int64_t> sums;  // per trial
  std::int64_t max_sum = 0;
  double threshold = 0;        // 3 c^2 n
  std::int64_t exceeding = 0;  // trials with sum > threshold
};

/// Runs `trials` independent trials; trial k draws from derive_seed(seed, k).
BallsBinsResult balls_and_bins_trial(int n, double c, std::int64_t trials,
                                     ForbiddenBinPolicy policy, std::uint64_t seed,
                                     Execution exec = Execution::parallel);

}  // namespace evo
