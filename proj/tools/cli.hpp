#pragma once

#include <ostream>
#include <span>
#include <string>

namespace abcde::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). Returns 0 on success,
/// 1 when findings reach the fail level, 2 on usage, I/O or parse errors.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace abcde::cli
