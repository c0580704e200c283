#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sshopm {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitParse = 2, kExitNumerical = 3 };

/// Runs the command line tool; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sshopm
