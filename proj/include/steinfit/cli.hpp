#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "steinfit/sample.hpp"

namespace steinfit {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// Reads newline-delimited reals, or the named column of a comma-separated
/// file with a header row. Blank lines and lines starting with '#' are
/// skipped. Throws std::invalid_argument naming the 1-based line of the first
/// bad entry.
Sample read_sample(std::istream& in, const std::optional<std::string>& column = std::nullopt);

/// Runs `steinfit <args...>` (args excludes the program name) and returns
/// the exit code. Normal output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace steinfit
