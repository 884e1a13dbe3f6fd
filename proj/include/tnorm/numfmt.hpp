#pragma once

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace tnorm {

/// Shortest decimal text that reads back to the same double.
inline std::string fmt_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw std::runtime_error("cannot format double");
  return std::string(buf, ptr);
}

/// Fixed-point text with `digits` decimals; used where output must be
/// byte-stable and human-sized (SVG coordinates).
inline std::string fmt_fixed(double value, int digits) {
  char buf[64];
  if (value == 0.0) value = 0.0;  // drop negative zero
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, digits);
  if (ec != std::errc{}) throw std::runtime_error("cannot format double");
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("cannot parse number '" + std::string(text) + "'");
  return value;
}

}  // namespace tnorm
