#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chr::cli {

// Exit codes of the chrrp tool.
enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,  // parse error or rejected translation
  kBudget = 3,
  kMismatch = 4,
};

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chr::cli
