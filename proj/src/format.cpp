#include "porosplit/format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>

#include "porosplit/error.hpp"

namespace porosplit {

std::string format_double(double value) {
  if (value == 0.0) return "0";  // also folds -0
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

namespace {

std::string trimmed(const std::string& text) {
  auto begin = std::find_if_not(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); });
  auto end = std::find_if_not(text.rbegin(), text.rend(), [](unsigned char c) { return std::isspace(c); }).base();
  return begin < end ? std::string(begin, end) : std::string();
}

}  // namespace

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trimmed(text);
  double value = 0.0;
  const auto result = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || result.ec != std::errc() || result.ptr != t.data() + t.size() || !std::isfinite(value)) {
    throw Error(ErrorKind::InvalidConfig, what + ": expected a number, got '" + text + "'");
  }
  return value;
}

int parse_int(const std::string& text, const std::string& what) {
  const std::string t = trimmed(text);
  int value = 0;
  const auto result = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || result.ec != std::errc() || result.ptr != t.data() + t.size()) {
    throw Error(ErrorKind::InvalidConfig, what + ": expected an integer, got '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& text, const std::string& what) {
  std::string t = trimmed(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "no" || t == "0") return false;
  throw Error(ErrorKind::InvalidConfig, what + ": expected true/false, got '" + text + "'");
}

}  // namespace porosplit
