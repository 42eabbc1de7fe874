#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stphase {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitInvariant = 3;

// args excludes the program name. Input named "-" is read from `in`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace stphase
