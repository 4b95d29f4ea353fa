#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace logspring::cli {

/// Exit codes: 0 success, 2 usage or input error, 3 numerical failure, 4 fit failure.
enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3, kFitFailure = 4 };

/// Runs one command line (args[0] is the program name). Data goes to `out`,
/// diagnostics to `err`; `in` backs "-" and missing input paths.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

} // namespace logspring::cli
