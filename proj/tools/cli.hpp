#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace robustlu::cli {

/// Exit codes: 0 completed, 1 certificate refuted, 2 usage or input error.
enum ExitCode : int { kCompleted = 0, kRefuted = 1, kUsage = 2 };

/// Runs one command line (without the program name); reports go to out,
/// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace robustlu::cli
