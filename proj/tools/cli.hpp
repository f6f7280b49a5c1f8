#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gsc::cli {

/// Exit codes: 0 success, 1 runtime failure, 2 invalid arguments.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gsc::cli
