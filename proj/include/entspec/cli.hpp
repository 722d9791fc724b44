#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace entspec::cli {

/// Process exit status contract of the command-line driver.
enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kConfigError = 2,
  kCalibrationError = 3,
  kDataMismatch = 4,
  kIoError = 5,
};

/// Runs `entspec <command> [options]`; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entspec::cli
