#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sebkit {

// Dispatches one subcommand invocation (argv without the program name) and
// writes the report to `out`. Returns 0 when the report is ok, 1 for a
// completed analysis with ok = false, 2 for usage/parse errors.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sebkit
