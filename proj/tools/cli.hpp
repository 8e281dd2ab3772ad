#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace ictal::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kInternalError = 3,
};

// Runs one command line (without the program name). Never throws.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace ictal::cli
