#pragma once

#include <ostream>
#include <span>
#include <string>

namespace svaa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation; `args` excludes the program name.
/// Returns 0 on success, 1 on data errors, 2 on usage errors.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace svaa::cli
