#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "satotate/interval.hpp"
#include "satotate/numthy/modarith.hpp"

namespace satotate::curves {

/// Y^2 = X^3 + aX + b over the integers.
struct CurveParams {
    std::int64_t a = 0;
    std::int64_t b = 0;

    /// -16(4a^3 + 27b^2).
    __int128 discriminant() const noexcept {
        const __int128 A = a, B = b;
        return -16 * (4 * A * A * A + 27 * B * B);
    }

    bool singular_over_q() const noexcept { return discriminant() == 0; }

    /// p does not divide -16(4a^3 + 27b^2). Never true at p = 2.
    bool good_reduction(std::uint64_t p) const noexcept {
        if (p == 2) return false;
        const auto ar = numthy::reduce(a, p), br = numthy::reduce(b, p);
        const auto c = (4 * numthy::mul_mod(numthy::mul_mod(ar, ar, p), ar, p) + 27 * numthy::mul_mod(br, br, p)) % p;
        return c != 0;
    }

    friend bool operator==(const CurveParams&, const CurveParams&) = default;
};

struct TraceResult {
    std::uint64_t p = 0;
    std::int64_t lambda = 0;
    double normalized = 0.0;

    static TraceResult make(std::uint64_t p, std::int64_t lambda) noexcept {
        return {p, lambda, normalized_trace(lambda, p)};
    }
};

/// Frobenius angle in [0, pi] with lambda = 2 sqrt(p) cos(theta).
inline double angle(const TraceResult& t) noexcept { return std::acos(std::clamp(t.normalized, -1.0, 1.0)); }

/// floor(2 sqrt p), the Hasse bound on |lambda|.
inline std::int64_t hasse_bound(std::uint64_t p) noexcept {
    auto r = static_cast<std::int64_t>(std::sqrt(4.0 * static_cast<double>(p)));
    while (static_cast<std::uint64_t>(r * r) > 4 * p) --r;
    while (static_cast<std::uint64_t>((r + 1) * (r + 1)) <= 4 * p) ++r;
    return r;
}

}  // namespace satotate::curves
