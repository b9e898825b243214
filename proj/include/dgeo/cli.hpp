#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dgeo::cli {

// Exit codes: 0 success, 1 runtime or input error, 2 validation failure or
// a theorem hypothesis that does not hold for the input.
inline constexpr int kOk = 0;
inline constexpr int kError = 1;
inline constexpr int kInvalid = 2;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace dgeo::cli
