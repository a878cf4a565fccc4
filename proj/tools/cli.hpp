#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dsirs::cli {

/// Exit statuses: 0 success, 1 bad input, 2 infeasible.
enum ExitCode : int { kOk = 0, kInputError = 1, kInfeasible = 2 };

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dsirs::cli
