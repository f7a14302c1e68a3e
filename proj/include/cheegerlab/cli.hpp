#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cheegerlab {

/// Command line entry point. Subcommands: eigen, cheeger, torsion, ratio,
/// verify, optimize, sweep, puncture. Results go to the configured output
/// directory (CSV, graymaps, manifest.txt) and one summary line per result
/// goes to `out`.
///
/// Exit codes: 0 success, 1 solver error or failed verification rows,
/// 2 invalid configuration or usage.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace cheegerlab
