#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "satotate/error.hpp"
#include "satotate/numthy/modarith.hpp"

namespace satotate::numthy {

/// Jacobi symbol (a | n) for odd n >= 1.
inline int jacobi(i64 a, i64 n) {
    if (n < 1 || (n & 1) == 0)
        throw DomainError("jacobi: lower argument must be odd and positive, got " + std::to_string(n));
    u64 m = static_cast<u64>(n);
    u64 x = reduce(a, m);
    int result = 1;
    while (x != 0) {
        while ((x & 1) == 0) {
            x >>= 1;
            const u64 r = m & 7;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(x, m);
        if ((x & 3) == 3 && (m & 3) == 3) result = -result;
        x %= m;
    }
    return m == 1 ? result : 0;
}

/// Kronecker symbol (a | n): the Jacobi symbol extended to even and negative
/// n. At 2 it is 0 for even a, +1 for a = ±1 (mod 8) and -1 for a = ±3 (mod 8);
/// (a | -1) is -1 exactly when a < 0.
inline int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    while ((n & 1) == 0) {
        if ((a & 1) == 0) return 0;
        n >>= 1;
        const u64 r = reduce(a, 8);
        if (r == 3 || r == 5) result = -result;
    }
    if (n == 1) return result;
    return result * jacobi(a, n);
}

/// Quadratic character table modulo an odd prime.
class ResidueTable {
public:
    ResidueTable() = default;

    explicit ResidueTable(u64 p) : p_(p), chi_(p, -1) {
        if (p < 3 || (p & 1) == 0) throw DomainError("ResidueTable: modulus must be an odd prime");
        chi_[0] = 0;
        for (u64 t = 1; t <= (p - 1) / 2; ++t) chi_[mul_mod(t, t, p)] = 1;
    }

    u64 modulus() const noexcept { return p_; }

    /// chi(t) for 0 <= t < p.
    int operator()(u64 t) const noexcept { return chi_[t]; }
    int at(i64 t) const noexcept { return chi_[reduce(t, p_)]; }

private:
    u64 p_ = 0;
    std::vector<std::int8_t> chi_;
};

/// Biquadratic residue symbol modulo p = 1 (mod 4). The value g^((p-1)/4)
/// for the least primitive root g is identified with i, so the symbol of
/// a = g^j is i^j. Returned exactly as a Gaussian integer.
class QuarticSymbol {
public:
    explicit QuarticSymbol(u64 p) : p_(p) {
        if (p % 4 != 1 || !is_prime(p))
            throw DomainError("quartic_symbol: modulus must be a prime = 1 (mod 4), got " + std::to_string(p));
        zeta_ = pow_mod(least_primitive_root(p), (p - 1) / 4, p);
    }

    u64 modulus() const noexcept { return p_; }

    /// Exponent k in {0,1,2,3} with symbol = i^k, or -1 when p | a.
    int exponent(i64 a) const noexcept {
        const u64 t = pow_mod(reduce(a, p_), (p_ - 1) / 4, p_);
        if (t == 0) return -1;
        u64 z = 1;
        for (int k = 0; k < 4; ++k) {
            if (z == t) return k;
            z = mul_mod(z, zeta_, p_);
        }
        return -1;  // unreachable for prime p
    }

    std::complex<int> operator()(i64 a) const noexcept {
        static constexpr std::complex<int> powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        const int k = exponent(a);
        return k < 0 ? std::complex<int>{0, 0} : powers[k];
    }

private:
    u64 p_;
    u64 zeta_;
};

inline std::complex<int> quartic_symbol(i64 a, u64 p) { return QuarticSymbol(p)(a); }

}  // namespace satotate::numthy
