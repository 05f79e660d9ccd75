#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ghabuse::cli {

inline constexpr int kExitClean = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFlagged = 2;

/// Runs one invocation; `args` excludes the program name. Machine output goes
/// to `out` (or --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ghabuse::cli
