#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cssel::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitDomain = 3,  // invalid input, including unreadable or malformed matrix files
  kExitSolver = 4,
};

/// Parses `args` (without the program name), runs the subcommand and writes
/// the JSON report to `out` (or to --output). Diagnostics go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cssel::cli
