#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace glp {

/// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitPolicyFailure = 1,
  kExitParseError = 2,
  kExitIoError = 3,
  kExitInconclusive = 4,
};

/// Runs the `glp` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace glp
