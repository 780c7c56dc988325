#pragma once

// Internal parsing and formatting helpers shared by the CSV, manifest and
// JSON writers. Not part of the public headers.

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace gencol::detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline double parse_double(const std::string& token, const std::string& context) {
  const std::string t = trim(token);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(context + ": not a number: '" + token + "'");
  }
  if (used != t.size())
    throw std::invalid_argument(context + ": trailing characters in '" + token + "'");
  return v;
}

inline long long parse_integer(const std::string& token, const std::string& context) {
  const std::string t = trim(token);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(context + ": not an integer: '" + token + "'");
  }
  if (used != t.size())
    throw std::invalid_argument(context + ": trailing characters in '" + token + "'");
  return v;
}

// Always 17 significant digits: enough to round-trip any double exactly.
// Used for every floating-point value written to artifact files.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

// Compact form for console messages.
inline std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace gencol::detail
