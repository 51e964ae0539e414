#pragma once

#include <string>

namespace sapr {

// exit codes
constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitSolverFailure = 3;
constexpr int kExitIoError = 4;

// Entry point for the sapr tool; subcommands run, validate, simulate.
int cli_main(int argc, const char* const* argv);

}  // namespace sapr
