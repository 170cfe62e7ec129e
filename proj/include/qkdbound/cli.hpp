// Command-line front end: analyze, sweep, verify.
//
// Exit codes: 0 success, 1 runtime failure (failed verification, unwritable
// output, violated precondition inside the library), 2 invalid flags.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qkdbound::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// `args` includes the program name, as in argv.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qkdbound::cli
