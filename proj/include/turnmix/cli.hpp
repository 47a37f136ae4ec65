#pragma once

namespace turnmix {

// Full command-line entry point. Returns the process exit code:
// 0 success, 1 validation/usage error, 2 runtime error (also used by
// `diagnose` when any split-Rhat is >= 1.05).
int run_cli(int argc, const char* const* argv);

}  // namespace turnmix
