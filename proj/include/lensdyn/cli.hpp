#pragma once

#include <iosfwd>

namespace lensdyn::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kUsage = 2;

// The `lensdyn` driver. Subcommands: compose, steady, check, simulate,
// tensor, matrix. Output files default to `out` when --out is absent or "-".
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lensdyn::cli
