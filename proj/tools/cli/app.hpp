#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace welsh::cli {

/// Exit codes: 0 success, 1 numerical failure, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitUsage = 2;

/// Parses args (without the program name), runs the subcommand and writes
/// the report to `out` or the --output file. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace welsh::cli
