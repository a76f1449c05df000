#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coevo {

/// Exit codes of the `coevo` tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFindings = 1,
  kExitInputError = 2,
  kExitExhausted = 3,
  kExitBackendError = 4,
};

/// Runs the tool; `args[0]` is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color = false);

}  // namespace coevo
