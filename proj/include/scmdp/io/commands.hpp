#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scmdp::io {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,         ///< all checks passed / witness found (find-violation)
    kExitViolation = 1,  ///< violation witnessed / nothing found (find-violation)
    kExitInvalid = 2,    ///< unreadable input, bad flags, caps exceeded
};

/**
 * Runs the command-line front end. `args` excludes the program name.
 *
 * Subcommands: check-axioms, solve, verify, find-violation, gen-scenario, recheck.
 * Reports go to --output (written atomically) or to `out`; diagnostics go to `err`.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scmdp::io
