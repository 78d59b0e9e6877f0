#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace dfd {

inline constexpr const char* kVersion = "dfd-0.1.0";

/// Guard applied to every division and logarithm in the quality measures.
inline constexpr double kEpsilon = 1e-10;

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void require(bool cond, const std::string& msg) {
    if (!cond) fail(msg);
}

/// Serializes a real with 17 significant digits so parsing it back is lossless.
inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double x) {
    constexpr double two_pi = 2.0 * M_PI;
    return x - two_pi * std::ceil((x - M_PI) / two_pi);
}

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace dfd
