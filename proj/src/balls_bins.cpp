#include "evo/balls_bins.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace evo {

std::string_view to_string(ForbiddenBinPolicy p) {
  return p == ForbiddenBinPolicy::none ? "none" : "adversarial_lowest";
}

ForbiddenBinPolicy parse_forbidden_bin_policy(std::string_view text) {
  if (text == "none") return ForbiddenBinPolicy::none;
  if (text == "adversarial_lowest" || text == "adversarial-lowest") {
    return ForbiddenBinPolicy::adversarial_lowest;
  }
  throw std::invalid_argument("unknown forbidden-bin policy: " + std::string(text));
}

std::int64_t ball_count(int n, double c) {
  if (n < 1) throw std::invalid_argument("balls and bins: n must be >= 1");
  if (!(c > 0)) throw std::invalid_argument("balls and bins: c must be positive");
  // Round away representation noise so that e.g. c = 0.3, n = 10 gives 3.
  const double m = c * n;
  const double r = std::round(m);
  return static_cast<std::int64_t>(std::abs(m - r) < 1e-9 * std::max(1.0, m) ? r : std::ceil(m));
}

std::int64_t balls_and_bins_once(int n, double c, ForbiddenBinPolicy policy, Rng& rng) {
  const std::int64_t balls = ball_count(n, c);
  std::vector<std::int64_t> count(n, 0);
  std::int64_t sum = 0;
  const auto drop = [&](int bin) {
    sum += 2 * count[bin] + 1;
    ++count[bin];
  };

  if (policy == ForbiddenBinPolicy::none || n == 1) {
    for (std::int64_t k = 0; k < balls; ++k) drop(static_cast<int>(rng.uniform(n)));
    return sum;
  }

  // Bins holding the current minimum, by index; the forbidden one is first.
  std::int64_t min_count = 0;
  std::set<int> at_min;
  for (int b = 0; b < n; ++b) at_min.insert(at_min.end(), b);
  for (std::int64_t k = 0; k < balls; ++k) {
    const int forbidden = *at_min.begin();
    int bin = static_cast<int>(rng.uniform(n - 1));
    if (bin >= forbidden) ++bin;
    if (count[bin] == min_count) at_min.erase(bin);
    drop(bin);
    if (at_min.empty()) {
      ++min_count;
      for (int b = 0; b < n; ++b) {
        if (count[b] == min_count) at_min.insert(at_min.end(), b);
      }
    }
  }
  return sum;
}

BallsBinsResult balls_and_bins_trial(int n, double c, std::int64_t trials,
                                     ForbiddenBinPolicy policy, std::uint64_t seed,
                                     Execution exec) {
  if (trials < 0) throw std::invalid_argument("balls and bins: trials must be >= 0");
  BallsBinsResult r;
  r.n = n;
  r.c = c;
  r.policy = policy;
  r.seed = seed;
  r.balls = ball_count(n, c);
  r.threshold = 3.0 * c * c * n;
  r.sums.assign(trials, 0);

  const auto one = [&](std::int64_t k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    r.sums[k] = balls_and_bins_once(n, c, policy, rng);
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < trials; ++k) one(k);
  } else {
    for (std::int64_t k = 0; k < trials; ++k) one(k);
  }

  for (auto s : r.sums) {
    r.max_sum = std::max(r.max_sum, s);
    if (static_cast<double>(s) > r.threshold) ++r.exceeding;
  }
  return r;
}

}  // namespace evo
