#pragma once

#include <string>

namespace porosplit {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Strict full-string parse; throws InvalidConfig naming `what` on failure.
double parse_double(const std::string& text, const std::string& what);
int parse_int(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);

}  // namespace porosplit
