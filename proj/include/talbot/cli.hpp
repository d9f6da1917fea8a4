// Command-line front end: talbot {carpet, energy, gauss, verify, darkpath, coeffs}.

#ifndef TALBOT_CLI_HPP
#define TALBOT_CLI_HPP

#include <iosfwd>

namespace talbot::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv, runs the subcommand and returns the process exit code:
/// 0 on success, 1 when a check fails or a computation does not converge,
/// 2 on a usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace talbot::cli

#endif
