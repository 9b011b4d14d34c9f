#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace symgeo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNotConverged = 3;

/// Runs the command line `symgeo <args...>` (args exclude the program name).
/// Reports go to `out` unless an output path is given; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symgeo::cli
