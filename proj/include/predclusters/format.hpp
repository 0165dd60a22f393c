#pragma once

#include <charconv>
#include <string>

namespace predclusters {

// Shortest decimal string that round-trips to the same double ("inf",
// "-inf", "nan" for the non-finite values).
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace predclusters
