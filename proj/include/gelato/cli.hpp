#pragma once

#include <iosfwd>

namespace gelato {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Entry point for the `gelato` command (estimate, simulate, diagnose).
/// JSON results go to `out` unless an output file is named.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gelato
