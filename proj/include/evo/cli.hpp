#pragma once

#include <ostream>

namespace evo {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;  // a checked claim failed
inline constexpr int kExitUsage = 2;       // unknown flag or invalid flag value
inline constexpr int kExitConfig = 3;      // config file unreadable or malformed
inline constexpr int kExitOutput = 4;      // output path not writable
inline constexpr int kExitFailure = 5;     // any other runtime error

/// Entry point of the `evo` tool. Human-readable output goes to `out`,
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace evo
