#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qpurify::cli {

enum ExitCode : int {
  kSuccess = 0,
  kComparisonFailed = 1,
  kConfigError = 2,
  kRuntimeFailure = 3,
};

/// Environment variable naming the default output directory of `simulate`.
inline constexpr const char* kOutDirEnv = "QPURIFY_OUT_DIR";

/// Runs `qpurify <args...>` (args excludes the program name). Subcommands:
/// simulate, density, compare, fp-check, roots, mean-purity.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qpurify::cli
