#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dpricing {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitInfeasible = 2 };

/// Runs the tool on `args` (without the program name). Reports go to files
/// named by --out, or to `out` when none is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dpricing
