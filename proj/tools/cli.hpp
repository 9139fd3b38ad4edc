#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gatefid::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2 };

/// Runs one `gatefid` invocation. `args` excludes the program name. The
/// artifact goes to --out when given, otherwise to `out`; the one-line summary
/// goes to `out` when the artifact was written to a file and to `err` otherwise.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gatefid::cli
