#pragma once

#include <charconv>
#include <string>

namespace becomp::detail {

// Shortest decimal that reads back to the same double.
inline std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace becomp::detail
