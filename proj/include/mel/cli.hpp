#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mel {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIncoherent = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitCapExceeded = 3;

/// Runs `mel <args...>` (args exclude the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mel
