#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "satotate/error.hpp"

namespace satotate {

/// Window [alpha, beta] of normalized traces lambda/(2 sqrt p), with
/// 0 < alpha <= beta <= 1. Membership is closed at both ends; the
/// left-open form exists so that adjacent windows partition exactly.
struct IntervalSpec {
    double alpha = 0.0;
    double beta = 0.0;
    bool left_open = false;

    static IntervalSpec closed(double alpha, double beta) {
        if (!(alpha > 0.0 && alpha <= beta && beta <= 1.0))
            throw DomainError("interval must satisfy 0 < alpha <= beta <= 1, got [" + std::to_string(alpha) + ", " +
                              std::to_string(beta) + "]");
        return {alpha, beta, false};
    }

    static IntervalSpec half_open(double alpha, double beta) {
        auto iv = closed(alpha, beta);
        iv.left_open = true;
        return iv;
    }

    bool contains(double t) const noexcept { return (left_open ? t > alpha : t >= alpha) && t <= beta; }
};

/// lambda / (2 sqrt p). Every module classifies traces through this one
/// expression so that window membership is decided identically everywhere.
inline double normalized_trace(std::int64_t lambda, std::uint64_t p) noexcept {
    return static_cast<double>(lambda) / (2.0 * std::sqrt(static_cast<double>(p)));
}

struct TraceRange {
    std::int64_t lo;
    std::int64_t hi;  // inclusive; empty when hi < lo
};

/// Integer traces r with normalized_trace(r, p) in the window.
inline TraceRange traces_in_window(std::uint64_t p, const IntervalSpec& iv) noexcept {
    const double scale = 2.0 * std::sqrt(static_cast<double>(p));
    auto lo = static_cast<std::int64_t>(std::floor(scale * iv.alpha)) - 1;
    auto hi = static_cast<std::int64_t>(std::ceil(scale * iv.beta)) + 1;
    while (lo <= hi && !iv.contains(normalized_trace(lo, p))) ++lo;
    while (hi >= lo && !iv.contains(normalized_trace(hi, p))) --hi;
    return {lo, hi};
}

}  // namespace satotate
