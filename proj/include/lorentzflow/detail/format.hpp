#pragma once

// Deterministic number -> text helpers.  std::to_chars only: no locale, no
// stream state, identical bytes for identical doubles on every run.

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace lorentzflow::detail {

// Shortest representation that round-trips.
[[nodiscard]] inline std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0.0 ? "inf" : "-inf";
    }
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Fixed decimals, for plot coordinates.
[[nodiscard]] inline std::string format_fixed(double v, int precision) {
    if (!std::isfinite(v)) {
        return format_double(v);
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed,
                                   precision);
    return std::string(buf, res.ptr);
}

} // namespace lorentzflow::detail
