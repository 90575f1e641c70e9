#pragma once

#include <iosfwd>

namespace kesm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the `kesm` tool. Returns the process exit code: 0 on
// success, 2 on usage or validation errors, 1 on runtime failures.
int run(int argc, const char* const* argv);

}  // namespace kesm::cli
