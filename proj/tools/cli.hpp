#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace autopeer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line (without the program name). Exit codes: 0 success,
/// 1 runtime or IO failure, 2 usage or validation error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "1,2,5" or "start:stop:step" (inclusive) or a mix; "" is an empty grid.
std::vector<double> parse_grid(const std::string& spec);

}  // namespace autopeer::cli
