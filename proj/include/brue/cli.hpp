#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace brue {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1; ///< runtime error, or azuma-check found a violation
inline constexpr int kExitConfig = 2;
inline constexpr int kExitResource = 3;

/**
 * Runs the `brue` command line. Subcommands: bench-sailing, bench-gametree,
 * sandbox, bounds, azuma-check. Results go to --out or `out`; diagnostics
 * and usage go to `err`.
 */
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int cli_dispatch(int argc, const char* const* argv);

/// Comma-separated budgets; an item is N, 2^k, or a power range 2^lo..2^hi.
std::vector<std::uint64_t> parse_budget_grid(std::string_view text);

} // namespace brue
