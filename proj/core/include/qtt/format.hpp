#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace qtt {

/// Shortest round-trip decimal form of x; stable across runs for byte-identical output.
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

}  // namespace qtt
