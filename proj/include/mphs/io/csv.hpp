#pragma once

#include <charconv>
#include <ostream>
#include <string>

namespace mphs::io {

// Shortest decimal representation that round-trips to the same double.
// Using std::to_chars keeps CSV output byte-identical across runs and
// independent of locale or stream formatting state.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

inline void write_cell(std::ostream& os, double v) { os << format_double(v); }

}  // namespace mphs::io
