#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "satotate/error.hpp"

namespace satotate::numthy {

using u64 = std::uint64_t;
using i64 = std::int64_t;

constexpr u64 mul_mod(u64 a, u64 b, u64 m) noexcept {
    if (((a | b) >> 32) == 0) return a * b % m;
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

constexpr u64 pow_mod(u64 base, u64 exp, u64 m) noexcept {
    u64 result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

/// Least nonnegative residue of a signed value.
constexpr u64 reduce(i64 a, u64 m) noexcept {
    const i64 sm = static_cast<i64>(m);
    i64 r = a % sm;
    return static_cast<u64>(r < 0 ? r + sm : r);
}

/// Inverse of a modulo m; a must be a unit.
inline u64 inv_mod(u64 a, u64 m) {
    i64 old_r = static_cast<i64>(a % m), r = static_cast<i64>(m);
    i64 old_s = 1, s = 0;
    while (r != 0) {
        const i64 q = old_r / r;
        old_r = std::exchange(r, old_r - q * r);
        old_s = std::exchange(s, old_s - q * s);
    }
    if (old_r != 1) throw DomainError("inv_mod: argument is not a unit");
    return reduce(old_s, m);
}

/// Deterministic Miller-Rabin for 64-bit inputs.
constexpr bool is_prime(u64 n) noexcept {
    if (n < 2) return false;
    for (u64 p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2u, 325u, 9375u, 28178u, 450775u, 9780504u, 1795265022u}) {
        u64 x = pow_mod(a, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

struct PrimePower {
    u64 prime;
    int exponent;
};

/// Trial-division factorization, ascending primes.
inline std::vector<PrimePower> factorize(u64 n) {
    std::vector<PrimePower> out;
    for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

inline u64 euler_phi(u64 n) {
    u64 phi = n;
    for (const auto& [p, e] : factorize(n)) phi = phi / p * (p - 1);
    return phi;
}

/// Square root of a quadratic residue modulo an odd prime (Tonelli-Shanks).
inline u64 sqrt_mod(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    if (pow_mod(a, (p - 1) / 2, p) != 1) throw DomainError("sqrt_mod: not a quadratic residue");
    if (p % 4 == 3) return pow_mod(a, (p + 1) / 4, p);
    u64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 z = 2;
    while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;
    u64 c = pow_mod(z, q, p);
    u64 x = pow_mod(a, (q + 1) / 2, p);
    u64 t = pow_mod(a, q, p);
    int m = s;
    while (t != 1) {
        int i = 0;
        u64 tt = t;
        while (tt != 1) {
            tt = mul_mod(tt, tt, p);
            ++i;
        }
        u64 b = c;
        for (int j = 0; j < m - i - 1; ++j) b = mul_mod(b, b, p);
        x = mul_mod(x, b, p);
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        m = i;
    }
    return x;
}

/// Least primitive root modulo an odd prime, by exhaustive order checking.
inline u64 least_primitive_root(u64 p) {
    if (p == 2) return 1;
    const auto factors = factorize(p - 1);
    for (u64 g = 2; g < p; ++g) {
        bool primitive = true;
        for (const auto& [q, e] : factors) {
            if (pow_mod(g, (p - 1) / q, p) == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive) return g;
    }
    throw DomainError("least_primitive_root: modulus is not prime");
}

}  // namespace satotate::numthy
