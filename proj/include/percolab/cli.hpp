#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace percolab {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitBudget = 3,
    kExitCheckFailed = 4,
};

/// Runs the CLI with args (without the program name). Records go to `out`
/// unless --output names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace percolab
