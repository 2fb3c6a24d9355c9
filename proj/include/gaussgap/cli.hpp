#pragma once

// Command-line front end. Exit codes: 0 success, 1 a verification check
// failed, 2 usage or configuration error, 3 numerical failure.

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace gaussgap {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitUsage = 2,
  kExitNumerical = 3,
};

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "a:b:s" -> a, a + s, ..., up to b (inclusive within 1e-9 steps).
/// Throws ConfigError for malformed text, s <= 0 or b < a.
std::vector<double> parse_range(std::string_view text);

/// Shortest decimal after rounding to 12 significant digits; integers get
/// a trailing ".0" (7 -> "7.0", 0.1 + 0.2 -> "0.3").
std::string format_label(double value);

}  // namespace gaussgap
