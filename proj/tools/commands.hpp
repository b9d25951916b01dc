#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qpr::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kCrossValidation = 2 };

/// Runs the command line `args` (without the program name), writing the
/// primary output to `out` (or to --out) and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qpr::cli
