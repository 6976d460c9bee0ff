#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "satotate/error.hpp"
#include "satotate/numeric/summation.hpp"
#include "satotate/numthy/modarith.hpp"
#include "satotate/numthy/symbols.hpp"

namespace satotate::numthy {

/// All Dirichlet characters modulo an odd prime p. Character k sends
/// g^j to exp(2 pi i jk/(p-1)) where g is the least primitive root.
class CharacterGroup {
public:
    explicit CharacterGroup(u64 p) : p_(p) {
        if (p < 3 || !is_prime(p))
            throw DomainError("enumerate_characters: modulus must be an odd prime, got " + std::to_string(p));
        g_ = least_primitive_root(p);
        const u64 order = p - 1;
        dlog_.assign(p, -1);
        u64 v = 1;
        for (u64 j = 0; j < order; ++j) {
            dlog_[v] = static_cast<std::int64_t>(j);
            v = mul_mod(v, g_, p);
        }
        roots_.resize(order);
        for (u64 j = 0; j < order; ++j) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(order);
            roots_[j] = {std::cos(angle), std::sin(angle)};
        }
    }

    u64 modulus() const noexcept { return p_; }
    u64 generator() const noexcept { return g_; }
    std::size_t size() const noexcept { return p_ - 1; }
    static constexpr std::size_t principal = 0;

    /// Index of the character chi_k1 * chi_k2.
    std::size_t product(std::size_t k1, std::size_t k2) const noexcept { return (k1 + k2) % (p_ - 1); }
    std::size_t conjugate(std::size_t k) const noexcept { return (p_ - 1 - k) % (p_ - 1); }

    /// Discrete logarithm base g of n, or -1 when p | n.
    std::int64_t dlog(i64 n) const noexcept { return dlog_[reduce(n, p_)]; }

    std::complex<double> operator()(std::size_t k, i64 n) const noexcept {
        const std::int64_t j = dlog(n);
        if (j < 0) return {0.0, 0.0};
        return roots_[(static_cast<u64>(j) * k) % (p_ - 1)];
    }

private:
    u64 p_;
    u64 g_;
    std::vector<std::int64_t> dlog_;
    std::vector<std::complex<double>> roots_;
};

inline CharacterGroup enumerate_characters(u64 p) { return CharacterGroup(p); }

/// Left side of the orthogonality identity: sum over all characters of
/// |sum_{n=1..N} a_n chi(n)|^2, with seq[n-1] = a_n.
inline double character_moment(const CharacterGroup& group, std::span<const std::complex<double>> seq) {
    numeric::CompensatedSum total;
    for (std::size_t k = 0; k < group.size(); ++k) {
        std::complex<double> s{0.0, 0.0};
        for (std::size_t n = 1; n <= seq.size(); ++n) s += seq[n - 1] * group(k, static_cast<i64>(n));
        total.add(std::norm(s));
    }
    return total.value();
}

/// Right side: phi(q) * sum over reduced classes a of |sum_{n = a mod q} a_n|^2.
inline double residue_class_moment(u64 q, std::span<const std::complex<double>> seq) {
    std::vector<std::complex<double>> by_class(q, {0.0, 0.0});
    for (std::size_t n = 1; n <= seq.size(); ++n) by_class[n % q] += seq[n - 1];
    numeric::CompensatedSum total;
    for (u64 a = 1; a < q; ++a)
        if (std::gcd(a, q) == 1) total.add(std::norm(by_class[a]));
    return static_cast<double>(euler_phi(q)) * total.value();
}

/// sum over non-principal chi of |sum_{n<=N} chi(n)|^4.
inline double nonprincipal_fourth_moment(const CharacterGroup& group, u64 N) {
    // chi(n) depends on n mod p; count multiplicities of each residue first.
    const u64 p = group.modulus();
    std::vector<u64> mult(p, 0);
    for (u64 r = 1; r < p; ++r) mult[r] = N / p + (r <= N % p ? 1 : 0);
    numeric::CompensatedSum total;
    for (std::size_t k = 1; k < group.size(); ++k) {
        std::complex<double> s{0.0, 0.0};
        for (u64 r = 1; r < p; ++r) s += static_cast<double>(mult[r]) * group(k, static_cast<i64>(r));
        const double m = std::norm(s);
        total.add(m * m);
    }
    return total.value();
}

struct PolyaVinogradovResult {
    std::int64_t sum;
    double bound;
};

/// Partial sum of chi_d(n) = (d | n) for n <= N against 2 sqrt|d| ln|d|.
inline PolyaVinogradovResult polya_vinogradov_check(i64 d, u64 N) {
    if (d >= 0 || (reduce(d, 4) != 0 && reduce(d, 4) != 1))
        throw DomainError("polya_vinogradov_check: d must be a negative discriminant, got " + std::to_string(d));
    if (N < 1) throw DomainError("polya_vinogradov_check: N must be positive");
    std::int64_t s = 0;
    for (u64 n = 1; n <= N; ++n) s += kronecker(d, static_cast<i64>(n));
    const double ad = static_cast<double>(-d);
    return {s, 2.0 * std::sqrt(ad) * std::log(ad)};
}

}  // namespace satotate::numthy
