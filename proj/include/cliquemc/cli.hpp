#pragma once

namespace cliquemc {

// Command-line entry point. Exit codes: 0 success, 1 validation or I/O
// error, 2 budget exceeded / unreachable target.
int run_cli(int argc, const char* const* argv);

}  // namespace cliquemc
