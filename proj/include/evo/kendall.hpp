#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace evo {

/// Number of inversions in a sequence of distinct values, by merge counting.
std::int64_t count_inversions(std::span<const std::int32_t> values);

/// Kendall tau distance between two permutations of the same size: the
/// number of discordant pairs. O(n log n).
std::int64_t kendall_tau(std::span<const std::int32_t> p1, std::span<const std::int32_t> p2);

/// O(n^2) pair enumeration of the same quantity.
std::int64_t kendall_tau_brute_force(std::span<const std::int32_t> p1,
                                     std::span<const std::int32_t> p2);

bool is_permutation(std::span<const std::int32_t> p);

}  // namespace evo
