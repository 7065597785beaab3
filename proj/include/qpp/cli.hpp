#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qpp {

enum ExitCode : int {
    kExitOk = 0,
    kExitRefinementFails = 1,
    kExitUsage = 2,
    kExitCapacity = 3,
};

/// Runs the command line `args` (without the program name), writing results
/// to `out` and diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Aligned columns separated by two spaces; the first row is the header.
std::string render_table(const std::vector<std::vector<std::string>>& rows);

/// 10 significant digits.
std::string format_probability(double p);

}  // namespace qpp
