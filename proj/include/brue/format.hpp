#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace brue {

/// Round-trippable decimal form (17 significant digits, "%.17g").
std::string format_real(double v);

/// Shortest decimal form that reads back to the same double.
std::string format_short(double v);

std::string format_hex64(std::uint64_t v);

/// Splits on `sep`, trimming surrounding blanks; empty input gives no items.
std::vector<std::string> split_list(std::string_view text, char sep = ',');

/// Strict numeric parsing; throws ConfigError naming `what`.
double parse_real(std::string_view text, std::string_view what);
std::uint64_t parse_uint(std::string_view text, std::string_view what);

} // namespace brue
