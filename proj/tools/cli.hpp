#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bv::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kAssertionFailed = 2,
  kNumericalFailure = 3,
};

/// Parses argv-style arguments (without the program name) and dispatches.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bv::cli
