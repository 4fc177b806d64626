#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plankb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `plankb` invocation. `args` excludes the program name.
/// Relative paths resolve against $PLANKB_WORKSPACE when it is set.
int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace plankb::cli
