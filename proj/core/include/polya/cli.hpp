#pragma once

namespace polya::cli {

// Entry point for the command-line driver. Returns the process exit code:
// 0 all checks passed, 1 violation or hypothesis refusal (report written),
// 2 configuration or numerical error.
int run(int argc, const char* const* argv);

} // namespace polya::cli
