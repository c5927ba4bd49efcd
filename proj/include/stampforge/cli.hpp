#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stampforge {

/// Exit statuses of the command-line tool.
enum ExitStatus : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// Runs the command-line tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace stampforge
