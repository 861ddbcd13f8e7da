#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace evo {

enum SeriesFlag : std::uint32_t {
  kRoundEnd = 1u << 0,
  kPreludeEnd = 1u << 1,
  kPassEnd = 1u << 2,
  kViolation = 1u << 3,
};

std::string flags_to_string(std::uint32_t flags);

/// One sampled point of a run.
struct TimeSeriesRecord {
  std::uint64_t t = 0;
  std::int64_t I = 0;
  std::uint64_t round = 0;
  std::optional<std::int64_t> S;  // instrumented runs only
  std::optional<std::int64_t> B;
  std::uint64_t good_swaps = 0;  // cumulative
  std::uint32_t flags = 0;
};

}  // namespace evo
