#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rmteq::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kConfigError = 2,
  kNumericFailure = 3,
  kIoError = 4,
};

/// Entry point of `rmt-eq`; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rmteq::cli
