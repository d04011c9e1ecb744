#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dbird::cli {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kInput = 3,
  kNumerical = 4,
};

/// Runs the command line (args[0] is the program name) and returns an exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dbird::cli
