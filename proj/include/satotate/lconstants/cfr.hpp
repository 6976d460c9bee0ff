#pragma once

#include <cstdint>
#include <numeric>

#include "satotate/error.hpp"
#include "satotate/numthy/modarith.hpp"
#include "satotate/numthy/symbols.hpp"

namespace satotate::lconstants {

namespace detail {

inline std::uint64_t square_mod(std::uint64_t v, std::uint64_t m) { return numthy::mul_mod(v % m, v % m, m); }

inline void require_positive(std::int64_t n, std::int64_t f, std::int64_t r) {
    if (n < 1 || f < 1 || r < 1) throw DomainError("c_f^r(n) needs positive n, f, r");
}

}  // namespace detail

/// c_f^r(n) = sum over a in [1, 4n] with (a, 4n) = 1 and (r^2 - a f^2, 4n) = 4
/// of the Kronecker symbol (a/n). Direct enumeration.
inline std::int64_t c_f_r_direct(std::int64_t n, std::int64_t f, std::int64_t r) {
    detail::require_positive(n, f, r);
    const auto m = static_cast<std::uint64_t>(4 * n);
    const auto r2 = detail::square_mod(static_cast<std::uint64_t>(r), m);
    const auto f2 = detail::square_mod(static_cast<std::uint64_t>(f), m);
    std::int64_t sum = 0;
    for (std::uint64_t a = 1; a <= m; ++a) {
        if (std::gcd(a, m) != 1) continue;
        const auto diff = (r2 + m - numthy::mul_mod(a, f2, m)) % m;
        if (std::gcd(diff, m) != 4) continue;
        sum += numthy::kronecker(static_cast<std::int64_t>(a), n);
    }
    return sum;
}

/// Factor of c_f^r(n) at 2, for 2^e || n.
inline std::int64_t c_local_two(unsigned e, std::uint64_t f, std::uint64_t r) {
    if (f % 2 == 1 && r % 2 == 1) {
        // a must be 1 mod 4 when e = 0 and 5 mod 8 otherwise
        if (e == 0) return 1;
        const std::int64_t mag = std::int64_t{1} << (e - 1);
        return e % 2 == 0 ? mag : -mag;
    }
    const std::uint64_t m = std::uint64_t{1} << (e + 2);
    const auto r2 = detail::square_mod(r, m);
    const auto f2 = detail::square_mod(f, m);
    std::int64_t sum = 0;
    for (std::uint64_t a = 1; a < m; a += 2) {
        const auto diff = (r2 + m - numthy::mul_mod(a, f2, m)) % m;
        if (std::gcd(diff, m) != 4) continue;
        const int k2 = (a % 8 == 1 || a % 8 == 7) ? 1 : -1;
        sum += (e % 2 == 0) ? 1 : k2;
    }
    return sum;
}

/// Factor of c_f^r(n) at an odd prime l, for l^e || n with e >= 1.
inline std::int64_t c_local_odd(std::uint64_t l, unsigned e, std::uint64_t f, std::uint64_t r) {
    std::int64_t scale = 1;
    for (unsigned i = 1; i < e; ++i) scale *= static_cast<std::int64_t>(l);
    const bool lr = r % l == 0;
    const bool lf = f % l == 0;
    if (e % 2 == 1) return (lr || lf) ? 0 : -scale;
    if (lr && lf) return 0;
    const auto L = static_cast<std::int64_t>(l);
    return scale * ((lr || lf) ? L - 1 : L - 2);
}

/// c_f^r(n) as a product of local factors over the prime powers of n.
inline std::int64_t c_f_r(std::int64_t n, std::int64_t f, std::int64_t r) {
    detail::require_positive(n, f, r);
    const auto F = static_cast<std::uint64_t>(f);
    const auto R = static_cast<std::uint64_t>(r);
    unsigned e2 = 0;
    std::int64_t value = 1;
    for (const auto& pp : numthy::factorize(static_cast<std::uint64_t>(n))) {
        if (pp.prime == 2) {
            e2 = pp.exponent;
            continue;
        }
        value *= c_local_odd(pp.prime, pp.exponent, F, R);
        if (value == 0) return 0;
    }
    return value * c_local_two(e2, F, R);
}

}  // namespace satotate::lconstants
