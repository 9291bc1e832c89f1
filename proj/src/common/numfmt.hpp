#pragma once

#include <charconv>
#include <string>

#include "common/error.hpp"

namespace ca {

// Shortest round-trip decimal text for a double; canonical across runs.
inline std::string num_to_string(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double num_from_string(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw Error(ErrorKind::Parse, "bad number '" + s + "'");
    }
    return v;
}

}  // namespace ca
