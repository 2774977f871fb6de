#pragma once

#include <iosfwd>

namespace cozeta {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitBudget = 3;

// Entry point of the command-line tool; output goes to out, diagnostics to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cozeta
