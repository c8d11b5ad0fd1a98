#pragma once

#include <iosfwd>

namespace wtidx {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point of the wtidx tool with injectable streams. Returns the exit code.
int run_cli(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wtidx
