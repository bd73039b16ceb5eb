#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace testrisk::cli {

/// Exit codes: 0 ok, 1 validation findings at error level (or an invariant
/// violation), 2 usage or parse error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation. args[0] is the program name. Machine output goes to
/// `out`, diagnostics to `err`; `--config -` and friends read `in`.
int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

}  // namespace testrisk::cli
