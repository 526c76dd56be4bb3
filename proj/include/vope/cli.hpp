#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vope {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  exit_ok = 0,
  exit_check_failed = 1,
  exit_usage = 2,     ///< usage, parse, algebra or domain error
  exit_internal = 3,  ///< step budget exhausted or internal error
};

/// Runs one command line (without the program name), writing results to
/// `out` and diagnostics to `err`. The step budget defaults to the
/// VOPE_STEP_BUDGET environment variable; `--budget` overrides it.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vope
