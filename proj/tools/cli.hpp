#pragma once

#include <iosfwd>

namespace lcc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;    // bad flags or unreadable input
inline constexpr int kExitNumeric = 2;  // infeasible LP or other numeric failure

/// Entry point behind the `lcc` executable. Subcommands: train, predict,
/// roc, benchmark, demo.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lcc::cli
