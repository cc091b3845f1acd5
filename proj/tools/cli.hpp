#pragma once

#include <ostream>

namespace pvmerge::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInternal = 1,
  kInputError = 2,
  kBudgetExceeded = 3,
  kCertificationFailed = 4,
};

inline constexpr int kSchemaVersion = 1;

/// Runs one command line. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pvmerge::cli
