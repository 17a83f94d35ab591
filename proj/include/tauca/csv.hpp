#pragma once

// Minimal CSV emission shared by every exporter. Reals are printed in the
// shortest form that round-trips, so identical runs give identical bytes.

#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>

namespace tauca::csv {

inline std::string format(double x) {
  if (x == 0.0) return "0";  // also folds -0
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

inline std::string format(std::int64_t x) { return std::to_string(x); }
inline std::string format(std::uint64_t x) { return std::to_string(x); }
inline std::string format(std::string_view s) { return std::string(s); }
inline std::string format(const char* s) { return std::string(s); }

/// Writes one comma-separated line.
template <typename... Fields>
void row(std::ostream& out, const Fields&... fields) {
  bool first = true;
  ((out << (first ? "" : ",") << format(fields), first = false), ...);
  out << '\n';
}

}  // namespace tauca::csv
