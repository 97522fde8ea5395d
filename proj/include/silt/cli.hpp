#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace silt {

/// Exit codes of the command line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_validation = 2,
    exit_numerical = 3,
};

/// Runs `silt <args...>` (args exclude the program name). Results go to
/// `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace silt
