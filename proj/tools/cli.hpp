#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace betadyn::cli {

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kCheckFailed = 2,
  kInfeasible = 3,
  kBudget = 4,
  kUsage = 5,
};

// Runs one command line (without the program name). Results go to `out`
// unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace betadyn::cli
