#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace meanforge {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitTheoremFailed = 1,
  kExitUsage = 2,
  kExitNoConvergence = 3,
};

/// Runs the tool on `args` (without the program name). Results go to `out`,
/// diagnostics to `err`.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace meanforge
