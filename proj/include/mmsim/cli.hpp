#pragma once

#include <iosfwd>

namespace mmsim {

// Stable exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;  // numerical failure outside the cases below
inline constexpr int exit_config = 2;
inline constexpr int exit_unstable = 3;  // report only
inline constexpr int exit_io = 4;

/// `mmsim report|sweep|stability|preset|dump ...`
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace mmsim
