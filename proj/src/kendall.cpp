#include "evo/kendall.hpp"

#include <stdexcept>

namespace evo {

namespace {

std::int64_t merge_count(std::vector<std::int32_t>& a, std::vector<std::int32_t>& scratch,
                         std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t count = merge_count(a, scratch, lo, mid) + merge_count(a, scratch, mid, hi);
  std::size_t l = lo, r = mid, out = lo;
  while (l < mid && r < hi) {
    if (a[r] < a[l]) {
      count += static_cast<std::int64_t>(mid - l);
      scratch[out++] = a[r++];
    } else {
      scratch[out++] = a[l++];
    }
  }
  while (l < mid) scratch[out++] = a[l++];
  while (r < hi) scratch[out++] = a[r++];
  for (std::size_t k = lo; k < hi; ++k) a[k] = scratch[k];
  return count;
}

void check_pair(std::span<const std::int32_t> p1, std::span<const std::int32_t> p2) {
  if (p1.size() != p2.size()) throw std::invalid_argument("kendall_tau: size mismatch");
  if (!is_permutation(p1) || !is_permutation(p2)) {
    throw std::invalid_argument("kendall_tau: arguments must be permutations");
  }
}

}  // namespace

bool is_permutation(std::span<const std::int32_t> p) {
  std::vector<bool> seen(p.size(), false);
  for (auto v : p) {
    if (v < 0 || static_cast<std::size_t>(v) >= p.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

std::int64_t count_inversions(std::span<const std::int32_t> values) {
  std::vector<std::int32_t> a(values.begin(), values.end());
  std::vector<std::int32_t> scratch(a.size());
  return merge_count(a, scratch, 0, a.size());
}

std::int64_t kendall_tau(std::span<const std::int32_t> p1, std::span<const std::int32_t> p2) {
  check_pair(p1, p2);
  // Order elements by p1 and count inversions of their p2 values.
  std::vector<std::int32_t> seq(p1.size());
  for (std::size_t x = 0; x < p1.size(); ++x) seq[p1[x]] = p2[x];
  return count_inversions(seq);
}

std::int64_t kendall_tau_brute_force(std::span<const std::int32_t> p1,
                                     std::span<const std::int32_t> p2) {
  check_pair(p1, p2);
  std::int64_t count = 0;
  for (std::size_t x = 0; x < p1.size(); ++x) {
    for (std::size_t y = 0; y < p1.size(); ++y) {
      count += p1[x] < p1[y] && p2[x] > p2[y];
    }
  }
  return count;
}

}  // namespace evo
