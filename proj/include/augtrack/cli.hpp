#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace augtrack {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitUsage = 2 };

/// Runs the `augtrack` command line; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace augtrack
