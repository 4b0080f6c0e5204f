#pragma once

#include <iosfwd>

namespace qdilog::cli {

enum ExitCode : int { exit_pass = 0, exit_numeric_failure = 1, exit_unsupported = 2, exit_usage = 3 };

/// The whole command line front end; main() only forwards to it.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qdilog::cli
