#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mdist::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kUsageError = 2,
  kPrecisionFailure = 3,
  kMonotonicityViolation = 4,
  kIoError = 5,
};

/// Runs the command line `args` (args[0] is the program name). Data goes to
/// files or `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mdist::cli
