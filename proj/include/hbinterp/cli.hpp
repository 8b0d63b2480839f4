#pragma once

// Batch command-line surface. One subcommand per invocation, one report per
// run: JSON by default, CSV for curve-shaped results.
//
// Exit codes: 0 success, 2 input or validation error, 3 numerical
// non-convergence, 1 unexpected internal failure.

#include <string>
#include <vector>

namespace hbinterp::cli {

inline constexpr int kReportVersion = 1;

int run(int argc, const char* const* argv);
/// args excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace hbinterp::cli
