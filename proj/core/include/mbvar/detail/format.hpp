#pragma once

#include <charconv>
#include <string>

namespace mbvar::detail {

// Shortest representation that round-trips a double, capped at 17
// significant digits by construction of std::to_chars.
inline std::string format_double(double x) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace mbvar::detail
