#pragma once

#include <iosfwd>

namespace odokit {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitSchema = 3,
  kExitIo = 4,
};

// Entry point of the `odokit` binary: subcommands simulate, calibrate,
// replay, evaluate and plot.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace odokit
