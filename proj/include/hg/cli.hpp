#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hg {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // failed cross-check, violated theorem, tensor disagreement
  kExitConfig = 2,   // usage, configuration, expression or geometry errors
  kExitDomain = 3,   // evaluation left the domain of a function
};

/// Runs `sasaki-hg` with the given arguments (without the program name).
/// Reports go to `out` (or the --out file), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hg
