#pragma once

#include <iosfwd>

#include "config.hpp"

namespace bhlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitVerify = 3;

/// Runs one validated command.  Result tables go to `out` (or the --out
/// file), diagnostics to `err`.  Returns the exit code.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full front end: argument parsing, config resolution, execution and the
/// mapping of errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bhlab::cli
