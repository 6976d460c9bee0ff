#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "satotate/curves/curve.hpp"
#include "satotate/curves/isomorphism.hpp"
#include "satotate/curves/trace.hpp"
#include "satotate/error.hpp"
#include "satotate/numthy/symbols.hpp"

namespace satotate::curves {

/// Frobenius traces of all p^2 reductions E(a, b) over F_p. Traces are
/// constant on isomorphism classes, so one naive evaluation per class is
/// spread over its orbit.
class TraceTable {
public:
    static constexpr std::int32_t singular = std::numeric_limits<std::int32_t>::min();

    explicit TraceTable(std::uint64_t p) : p_(p), lambda_(p * p, singular) {
        if (p < 2 || !numthy::is_prime(p)) throw DomainError("TraceTable: modulus must be prime");
        if (p <= 3) {
            for (std::uint64_t a = 0; a < p; ++a)
                for (std::uint64_t b = 0; b < p; ++b) {
                    const CurveParams E{static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)};
                    if (E.good_reduction(p)) lambda_[a * p + b] = static_cast<std::int32_t>(trace_naive(E, p).lambda);
                }
            return;
        }
        const numthy::ResidueTable chi(p);
        std::vector<std::uint64_t> mu4(p), mu6(p);
        for (std::uint64_t mu = 1; mu < p; ++mu) {
            const auto m2 = numthy::mul_mod(mu, mu, p);
            mu4[mu] = numthy::mul_mod(m2, m2, p);
            mu6[mu] = numthy::mul_mod(mu4[mu], m2, p);
        }
        for (std::uint64_t a = 0; a < p; ++a) {
            for (std::uint64_t b = 0; b < p; ++b) {
                if (lambda_[a * p + b] != singular) continue;
                const CurveParams E{static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)};
                if (!E.good_reduction(p)) continue;
                const auto lambda = static_cast<std::int32_t>(detail::character_trace(a, b, chi));
                for (std::uint64_t mu = 1; mu < p; ++mu)
                    lambda_[numthy::mul_mod(mu4[mu], a, p) * p + numthy::mul_mod(mu6[mu], b, p)] = lambda;
            }
        }
    }

    std::uint64_t modulus() const noexcept { return p_; }

    bool is_singular(std::uint64_t a, std::uint64_t b) const noexcept { return lambda_[a * p_ + b] == singular; }

    /// Trace of E(a, b) for residues 0 <= a, b < p; undefined when singular.
    std::int32_t operator()(std::uint64_t a, std::uint64_t b) const noexcept { return lambda_[a * p_ + b]; }

    std::uint64_t count_with_trace(std::int64_t r) const noexcept {
        std::uint64_t n = 0;
        for (auto l : lambda_) n += (l == r) ? 1 : 0;
        return n;
    }

private:
    std::uint64_t p_;
    std::vector<std::int32_t> lambda_;
};

struct IsoClass {
    std::uint64_t u;  // lexicographically least member
    std::uint64_t v;
    std::uint64_t size;
    std::int64_t trace;
    bool axis;  // contains a curve with a = 0 or b = 0

    friend bool operator==(const IsoClass&, const IsoClass&) = default;
};

/// Isomorphism classes of curves over F_p with a given trace.
struct IsoClassSet {
    std::uint64_t p = 0;
    std::int64_t r = 0;
    std::vector<IsoClass> classes;

    std::size_t off_axis_count() const noexcept {
        std::size_t n = 0;
        for (const auto& c : classes) n += c.axis ? 0 : 1;
        return n;
    }
    std::size_t axis_count() const noexcept { return classes.size() - off_axis_count(); }
    std::uint64_t curve_count() const noexcept {
        std::uint64_t n = 0;
        for (const auto& c : classes) n += c.size;
        return n;
    }
};

/// All isomorphism classes over F_p (p > 3), keyed by trace.
inline std::map<std::int64_t, IsoClassSet> classify_curves(const TraceTable& table) {
    const std::uint64_t p = table.modulus();
    if (p <= 3) throw DomainError("classify_curves: requires p > 3");
    std::map<std::int64_t, IsoClassSet> out;
    std::vector<bool> seen(p * p, false);
    for (std::uint64_t a = 0; a < p; ++a) {
        for (std::uint64_t b = 0; b < p; ++b) {
            if (seen[a * p + b] || table.is_singular(a, b)) continue;
            for (const auto& [c, d] : iso_orbit({static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)}, p))
                seen[c * p + d] = true;
            const std::int64_t r = table(a, b);
            auto& set = out[r];
            set.p = p;
            set.r = r;
            const CurveParams rep{static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)};
            set.classes.push_back({a, b, iso_class_size(rep, p), r, a == 0 || b == 0});
        }
    }
    return out;
}

inline IsoClassSet enumerate_iso_classes(const TraceTable& table, std::int64_t r) {
    auto all = classify_curves(table);
    if (auto it = all.find(r); it != all.end()) return it->second;
    return {table.modulus(), r, {}};
}

inline IsoClassSet enumerate_iso_classes(std::uint64_t p, std::int64_t r) {
    if (p <= 3) throw DomainError("enumerate_iso_classes: requires p > 3");
    const auto bound = hasse_bound(p);
    if (r == 0 || r > bound || r < -bound)
        throw DomainError("enumerate_iso_classes: trace must satisfy 0 < |r| < 2 sqrt(p)");
    return enumerate_iso_classes(TraceTable(p), r);
}

/// Number of (a, b) in F_p^2 with nonzero discriminant and trace r, as the
/// sum of isomorphism-class sizes.
inline std::uint64_t count_curves_with_trace(const TraceTable& table, std::int64_t r) {
    const auto all = classify_curves(table);
    const auto it = all.find(r);
    return it == all.end() ? 0 : it->second.curve_count();
}

inline std::uint64_t count_curves_with_trace(std::uint64_t p, std::int64_t r) {
    if (p <= 3) throw DomainError("count_curves_with_trace: requires p > 3");
    if (r > hasse_bound(p) || r < -hasse_bound(p)) return 0;
    return count_curves_with_trace(TraceTable(p), r);
}

/// Classes that contain a curve with a = 0 or b = 0, without building the
/// full p^2 table.
inline std::vector<IsoClass> axis_classes(std::uint64_t p) {
    if (p <= 3) throw DomainError("axis_classes: requires p > 3");
    const numthy::ResidueTable chi(p);
    std::vector<IsoClass> out;
    std::vector<bool> seen_a(p, false), seen_b(p, false);  // (a, 0) and (0, b)
    auto visit = [&](std::uint64_t a, std::uint64_t b) {
        const CurveParams E{static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)};
        for (const auto& [c, d] : iso_orbit(E, p)) (d == 0 ? seen_a[c] : seen_b[d]) = true;
        const auto r = detail::character_trace(a, b, chi);
        out.push_back({a, b, iso_class_size(E, p), r, true});
    };
    for (std::uint64_t b = 1; b < p; ++b)
        if (!seen_b[b]) visit(0, b);
    for (std::uint64_t a = 1; a < p; ++a)
        if (!seen_a[a]) visit(a, 0);
    return out;
}

}  // namespace satotate::curves
