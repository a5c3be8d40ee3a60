#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tlj {

/// Command-line entry point. Exit codes: 0 check passed or construction
/// succeeded, 1 check failed (JSON report on out), 2 input or usage error.
/// Reports go to `out` as JSON; a one-line human summary goes to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tlj
