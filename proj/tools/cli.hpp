#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hetsim::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  ok = 0,
  config_error = 2,
  not_converged = 3,
  io_error = 4,
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hetsim::cli
