#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bopim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;     // parse or IO failure
inline constexpr int kExitConfigError = 2;    // invalid configuration
inline constexpr int kExitNumericError = 3;   // sampler or factorization failure

/// Entry point of the `bopim` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bopim
