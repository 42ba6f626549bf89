#pragma once

#include <charconv>
#include <string>

namespace wiresense::detail {

// Locale-independent fixed-point formatting, so exported files are
// byte-identical across runs and environments.
inline void append_fixed(std::string& out, double value, int precision) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::fixed, precision);
  out.append(buf, res.ptr);
}

inline std::string format_fixed(double value, int precision) {
  std::string out;
  append_fixed(out, value, precision);
  return out;
}

}  // namespace wiresense::detail
