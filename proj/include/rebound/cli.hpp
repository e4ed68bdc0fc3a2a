#pragma once

// The `rebound` command line: validate, bounds, dhe, simulate, covariance,
// reduce. Exit codes: 0 success, 1 validation or solver failure, 2 parse, IO
// or usage failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace rebound {

/// Runs the command line with args[0] as the program name. Reports go to
/// `out` (or --out), diagnostics to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(const std::string &bytes);

} // namespace rebound
