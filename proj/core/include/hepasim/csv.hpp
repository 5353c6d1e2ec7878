#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hepasim::csv {

/// Shortest round-trippable form is not required; every number is written
/// with 17 significant digits so files are reproducible bit-for-bit.
std::string format_double(double value);

std::vector<std::string> split(std::string_view line, char delim = ',');

/// Parses a full-string double; throws ParseError naming `what` on failure.
double parse_double(std::string_view text, std::string_view what);

std::string_view trim(std::string_view text);

}  // namespace hepasim::csv
