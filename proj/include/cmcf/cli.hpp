#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cmcf {

// Exit codes of the command-line tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitSuiteFailure = 1;
inline constexpr int kExitConfigError = 2;

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cmcf
