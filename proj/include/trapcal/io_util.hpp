#pragma once

#include <charconv>
#include <string>

namespace trapcal {

// Shortest round-trip decimal form; keeps file output byte-reproducible.
inline std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace trapcal
