#pragma once

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "satotate/curves/curve.hpp"
#include "satotate/error.hpp"
#include "satotate/numthy/modarith.hpp"
#include "satotate/numthy/symbols.hpp"

namespace satotate::curves {

using ResiduePair = std::pair<std::uint64_t, std::uint64_t>;

/// Number of (a', b') = (mu^4 a, mu^6 b), mu in F_p^*, for a nonsingular
/// curve over F_p with p > 3.
inline std::uint64_t iso_class_size(const CurveParams& E, std::uint64_t p) {
    if (p <= 3) throw DomainError("iso_class_size: requires p > 3");
    const auto a = numthy::reduce(E.a, p), b = numthy::reduce(E.b, p);
    if (a == 0 && b == 0) throw ReductionError("iso_class_size: singular curve (0,0)");
    if (a == 0 && p % 3 == 1) return (p - 1) / 6;
    if (b == 0 && p % 4 == 1) return (p - 1) / 4;
    return (p - 1) / 2;
}

/// The F_p-isomorphism class of E listed by brute force over mu.
inline std::set<ResiduePair> iso_orbit(const CurveParams& E, std::uint64_t p) {
    const auto a = numthy::reduce(E.a, p), b = numthy::reduce(E.b, p);
    std::set<ResiduePair> orbit;
    for (std::uint64_t mu = 1; mu < p; ++mu) {
        const auto m2 = numthy::mul_mod(mu, mu, p);
        const auto m4 = numthy::mul_mod(m2, m2, p);
        const auto m6 = numthy::mul_mod(m4, m2, p);
        orbit.emplace(numthy::mul_mod(m4, a, p), numthy::mul_mod(m6, b, p));
    }
    return orbit;
}

/// Direct search for m with c = m^4 a and d = m^6 b (mod p).
inline bool isomorphic_by_search(const CurveParams& E1, const CurveParams& E2, std::uint64_t p) {
    const auto a = numthy::reduce(E1.a, p), b = numthy::reduce(E1.b, p);
    const auto c = numthy::reduce(E2.a, p), d = numthy::reduce(E2.b, p);
    for (std::uint64_t m = 1; m < p; ++m) {
        const auto m2 = numthy::mul_mod(m, m, p);
        const auto m4 = numthy::mul_mod(m2, m2, p);
        if (numthy::mul_mod(m4, a, p) != c) continue;
        if (numthy::mul_mod(numthy::mul_mod(m4, m2, p), b, p) == d) return true;
    }
    return false;
}

/// F_p-isomorphism test. Off the axes (p does not divide abcd) it uses the
/// residue criteria: for p = 1 (mod 4), c/a is a fourth power and
/// (c/a)^3 = (d/b)^2; for p = 3 (mod 4), c/a and d/b are squares and
/// (c/a)^3 = (d/b)^2. Axis curves go through the direct search.
inline bool is_isomorphic(const CurveParams& E1, const CurveParams& E2, std::uint64_t p) {
    if (p <= 3) throw DomainError("is_isomorphic: requires p > 3");
    const auto a = numthy::reduce(E1.a, p), b = numthy::reduce(E1.b, p);
    const auto c = numthy::reduce(E2.a, p), d = numthy::reduce(E2.b, p);
    if (a == 0 || b == 0 || c == 0 || d == 0) return isomorphic_by_search(E1, E2, p);
    const auto ca = numthy::mul_mod(c, numthy::inv_mod(a, p), p);
    const auto db = numthy::mul_mod(d, numthy::inv_mod(b, p), p);
    const bool cubic = numthy::mul_mod(numthy::mul_mod(ca, ca, p), ca, p) == numthy::mul_mod(db, db, p);
    if (!cubic) return false;
    if (p % 4 == 1) return numthy::pow_mod(ca, (p - 1) / 4, p) == 1;
    const auto P = static_cast<std::int64_t>(p);
    return numthy::jacobi(static_cast<std::int64_t>(ca), P) == 1 && numthy::jacobi(static_cast<std::int64_t>(db), P) == 1;
}

}  // namespace satotate::curves
