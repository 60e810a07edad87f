#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace heavytail::cli {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitVerification = 3;

// Runs the tool with `args` (without the program name). Regular output goes
// to `out`, diagnostics and manifests to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace heavytail::cli
