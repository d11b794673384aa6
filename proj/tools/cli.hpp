#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bdp::cli {

// Exit codes of the command-line tool.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 1;
inline constexpr int kDegenerate = 2;
inline constexpr int kNumericalFailure = 3;

/// Runs the tool with argv-style arguments (args[0] is the program name).
/// Results go to `out`, diagnostics to `err`; nothing is written to `out`
/// when a command fails before producing its result.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "%.16e": 17 significant digits, lowercase scientific.
std::string format_double(double v);

}  // namespace bdp::cli
