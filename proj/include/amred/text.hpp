#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace amred {

/// Shortest-safe round-trip formatting: 17 significant digits.
std::string format_double(double x);

std::vector<std::string> split(std::string_view text, char sep);

/// Strict double parse of the whole field; throws FormatError with `context`.
double parse_double(std::string_view field, std::string_view context);

}  // namespace amred
