#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chartdesign::cli {

/// Stable process exit codes.
enum ExitStatus : int {
  kSuccess = 0,
  kValidationFailure = 1,
  kUsageOrIo = 2,
  kJudgeFailure = 3,
};

/// Runs one command line (without the program name). Results go to `out`
/// or the -o file, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args);

}  // namespace chartdesign::cli
