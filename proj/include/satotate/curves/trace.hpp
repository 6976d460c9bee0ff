#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "satotate/curves/curve.hpp"
#include "satotate/error.hpp"
#include "satotate/numthy/modarith.hpp"
#include "satotate/numthy/symbols.hpp"

namespace satotate::curves {

using numthy::u64;
using numthy::i64;

/// Points on y^2 = x^3 + ax + b over F_p, point at infinity included, by
/// trying every (x, y).
inline u64 count_points_direct(const CurveParams& E, u64 p) {
    const u64 a = numthy::reduce(E.a, p), b = numthy::reduce(E.b, p);
    std::vector<u64> square_count(p, 0);
    for (u64 y = 0; y < p; ++y) ++square_count[numthy::mul_mod(y, y, p)];
    u64 points = 1;
    for (u64 x = 0; x < p; ++x) {
        const u64 rhs = (numthy::mul_mod(numthy::mul_mod(x, x, p), x, p) + numthy::mul_mod(a, x, p) + b) % p;
        points += square_count[rhs];
    }
    return points;
}

namespace detail {

inline void require_good(const CurveParams& E, u64 p) {
    if (!E.good_reduction(p))
        throw ReductionError("curve (" + std::to_string(E.a) + "," + std::to_string(E.b) + ") has bad reduction at p=" +
                             std::to_string(p));
}

/// -sum_x chi(x^3 + ax + b), stepping the cubic by finite differences.
inline i64 character_trace(u64 a, u64 b, const numthy::ResidueTable& chi) {
    const u64 p = chi.modulus();
    // f(x) = x^3 + ax + b; d1 = f(x+1) - f(x) = 3x^2 + 3x + 1 + a; d2 = 6x + 6; d3 = 6.
    u64 f = b % p, d1 = (1 + a) % p, d2 = 6 % p;
    const u64 d3 = 6 % p;
    i64 s = 0;
    for (u64 x = 0; x < p; ++x) {
        s += chi(f);
        f += d1;
        if (f >= p) f -= p;
        d1 += d2;
        if (d1 >= p) d1 -= p;
        d2 += d3;
        if (d2 >= p) d2 -= p;
    }
    return -s;
}

}  // namespace detail

/// lambda = p + 1 - #E(F_p) by summing the quadratic character, with a
/// prebuilt residue table for p > 3.
inline TraceResult trace_naive(const CurveParams& E, const numthy::ResidueTable& chi) {
    const u64 p = chi.modulus();
    detail::require_good(E, p);
    if (p <= 3) return TraceResult::make(p, static_cast<i64>(p + 1) - static_cast<i64>(count_points_direct(E, p)));
    return TraceResult::make(p, detail::character_trace(numthy::reduce(E.a, p), numthy::reduce(E.b, p), chi));
}

inline TraceResult trace_naive(const CurveParams& E, u64 p) {
    detail::require_good(E, p);
    if (p <= 3) return TraceResult::make(p, static_cast<i64>(p + 1) - static_cast<i64>(count_points_direct(E, p)));
    return trace_naive(E, numthy::ResidueTable(p));
}

namespace detail {

struct Point {
    u64 x = 0, y = 0;
    bool inf = true;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Affine short-Weierstrass arithmetic over F_p, p > 3.
class CurveGroup {
public:
    CurveGroup(u64 a, u64 p) : a_(a), p_(p) {}

    u64 modulus() const noexcept { return p_; }

    Point neg(const Point& P) const noexcept { return P.inf ? P : Point{P.x, P.y == 0 ? 0 : p_ - P.y, false}; }

    Point add(const Point& P, const Point& Q) const {
        if (P.inf) return Q;
        if (Q.inf) return P;
        u64 slope;
        if (P.x == Q.x) {
            if ((P.y + Q.y) % p_ == 0) return {};
            const u64 num = (3 * numthy::mul_mod(P.x, P.x, p_) + a_) % p_;
            slope = numthy::mul_mod(num, numthy::inv_mod(2 * P.y % p_, p_), p_);
        } else {
            const u64 num = (Q.y + p_ - P.y) % p_;
            const u64 den = (Q.x + p_ - P.x) % p_;
            slope = numthy::mul_mod(num, numthy::inv_mod(den, p_), p_);
        }
        const u64 x3 = (numthy::mul_mod(slope, slope, p_) + 2 * p_ - P.x - Q.x) % p_;
        const u64 y3 = (numthy::mul_mod(slope, (P.x + p_ - x3) % p_, p_) + p_ - P.y) % p_;
        return {x3, y3, false};
    }

    Point mul(u64 k, Point P) const {
        Point R;
        while (k > 0) {
            if (k & 1) R = add(R, P);
            P = add(P, P);
            k >>= 1;
        }
        return R;
    }

private:
    u64 a_, p_;
};

inline u64 splitmix(u64& state) noexcept {
    u64 z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Every m in [lo, hi] with mP = O, by baby-step giant-step. Sorted.
inline std::vector<u64> annihilators(const CurveGroup& G, const Point& P, u64 lo, u64 hi) {
    const u64 width = hi - lo;
    u64 s = 1;
    while (s * s < width + 1) ++s;
    std::vector<std::pair<u64, u64>> baby;  // (x, j) for jP, 1 <= j <= s
    baby.reserve(s);
    std::vector<u64> baby_y(s + 1, 0);
    std::vector<u64> out;
    Point jP = P;
    for (u64 j = 1; j <= s; ++j) {
        if (jP.inf) {
            // P has order j; its multiples are the answer
            for (u64 m = (lo + j - 1) / j * j; m <= hi; m += j) out.push_back(m);
            return out;
        }
        baby.emplace_back(jP.x, j);
        baby_y[j] = jP.y;
        jP = G.add(jP, P);
    }
    std::sort(baby.begin(), baby.end());
    const Point step = G.mul(s, P);
    Point giant = G.mul(lo, P);
    // m = base (giant = O) or m = base + j (giant = -jP) covers [lo, hi]
    for (u64 base = lo; base <= hi; base += s, giant = G.add(giant, step)) {
        if (giant.inf) {
            out.push_back(base);
            continue;
        }
        auto it = std::lower_bound(baby.begin(), baby.end(), std::pair<u64, u64>{giant.x, 0});
        for (; it != baby.end() && it->first == giant.x; ++it) {
            const u64 j = it->second;
            if ((giant.y + baby_y[j]) % G.modulus() == 0 && base + j <= hi) out.push_back(base + j);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

/// Group order by baby-step giant-step inside the Hasse interval, or
/// nullopt when up to `max_points` random points leave more than one
/// admissible order.
inline std::optional<TraceResult> trace_bsgs_unchecked(const CurveParams& E, u64 p, int max_points = 8) {
    detail::require_good(E, p);
    if (p <= 3) return std::nullopt;
    const u64 a = numthy::reduce(E.a, p), b = numthy::reduce(E.b, p);
    const detail::CurveGroup G(a, p);
    const auto bound = static_cast<u64>(hasse_bound(p));
    const u64 lo = p + 1 - bound, hi = p + 1 + bound;
    u64 state = (static_cast<u64>(E.a) * 0x100000001b3ull) ^ (static_cast<u64>(E.b) << 1) ^ (p << 32);
    // Candidate group orders: those annihilating every point tried so far.
    std::vector<u64> candidates;
    int points = 0;
    for (int attempt = 0; points < max_points && attempt < 64 * max_points; ++attempt) {
        const u64 x = detail::splitmix(state) % p;
        const u64 rhs = (numthy::mul_mod(numthy::mul_mod(x, x, p), x, p) + numthy::mul_mod(a, x, p) + b) % p;
        detail::Point P;
        if (rhs == 0) {
            P = {x, 0, false};
        } else {
            if (numthy::pow_mod(rhs, (p - 1) / 2, p) != 1) continue;
            P = {x, numthy::sqrt_mod(rhs, p), false};
        }
        auto found = detail::annihilators(G, P, lo, hi);
        if (points++ > 0) {
            std::vector<u64> both;
            std::set_intersection(candidates.begin(), candidates.end(), found.begin(), found.end(),
                                  std::back_inserter(both));
            found = std::move(both);
        }
        candidates = std::move(found);
        if (candidates.empty()) return std::nullopt;  // inconsistent; let the caller fall back
        if (candidates.size() == 1)
            return TraceResult::make(p, static_cast<i64>(p + 1) - static_cast<i64>(candidates.front()));
    }
    return std::nullopt;
}

/// Same contract as trace_naive; falls back to it when the group order is
/// ambiguous (small p, or a group of small exponent).
inline TraceResult trace_bsgs(const CurveParams& E, u64 p) {
    if (auto t = trace_bsgs_unchecked(E, p)) return *t;
    return trace_naive(E, p);
}

enum class Backend { naive, bsgs, automatic };

/// Default p above which the automatic backend switches to BSGS.
inline constexpr u64 default_bsgs_threshold = 10'000;

}  // namespace satotate::curves
