#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "satotate/curves/classes.hpp"
#include "satotate/error.hpp"
#include "satotate/interval.hpp"
#include "satotate/numthy/characters.hpp"
#include "satotate/numthy/symbols.hpp"

namespace satotate::curves {

/// Off-axis class representatives over F_p with trace in the window.
inline std::vector<IsoClass> off_axis_classes_in_window(const TraceTable& table, const IntervalSpec& iv) {
    std::vector<IsoClass> reps;
    for (const auto& [r, set] : classify_curves(table)) {
        if (!iv.contains(normalized_trace(r, table.modulus()))) continue;
        for (const auto& c : set.classes)
            if (!c.axis) reps.push_back(c);
    }
    return reps;
}

/// #{|a| <= A, |b| <= B : p does not divide ab, E(a, b) is isomorphic to one of reps}.
inline std::uint64_t count_box_in_classes(std::uint64_t p, const std::vector<IsoClass>& reps, std::int64_t A,
                                          std::int64_t B) {
    std::vector<bool> member(p * p, false);
    for (const auto& c : reps)
        for (const auto& [u, v] : iso_orbit({static_cast<std::int64_t>(c.u), static_cast<std::int64_t>(c.v)}, p))
            member[u * p + v] = true;
    std::uint64_t n = 0;
    for (std::int64_t a = -A; a <= A; ++a)
        for (std::int64_t b = -B; b <= B; ++b) {
            const auto ar = numthy::reduce(a, p), br = numthy::reduce(b, p);
            if (ar != 0 && br != 0 && member[ar * p + br]) ++n;
        }
    return n;
}

/// The same count written as a character sum. For p = 1 (mod 4):
///   1/(4 phi(p)) sum_j sum_a sum_b sum_{k=1..4} (a u_j^-1 / p)_4^k sum_chi chi(a^3 u_j^-3 b^-2 v_j^2),
/// evaluated in the factored order (sum over j, then separate a- and b-sums).
/// For p = 3 (mod 4) the quartic factor is replaced by
/// (chi_0(a) + (a u_j^-1 / p)) (chi_0(b) + (b v_j^-1 / p)).
inline double character_sum_count(std::uint64_t p, const std::vector<IsoClass>& reps, std::int64_t A, std::int64_t B) {
    if (p <= 3) throw DomainError("character_sum_count: requires p > 3");
    const numthy::CharacterGroup G(p);
    const std::size_t order = G.size();
    using C = std::complex<double>;
    std::complex<double> total{0.0, 0.0};

    if (p % 4 == 1) {
        const numthy::QuarticSymbol q4(p);
        auto quartic = [&](std::int64_t n, int k) -> C {
            const auto v = q4(n);
            C z(v.real(), v.imag());
            C out(1.0, 0.0);
            const int kk = ((k % 4) + 4) % 4;
            if (v == std::complex<int>(0, 0)) return {0.0, 0.0};
            for (int i = 0; i < kk; ++i) out *= z;
            return out;
        };
        for (int k = 1; k <= 4; ++k) {
            for (std::size_t chi = 0; chi < order; ++chi) {
                const std::size_t chi2 = (2 * chi) % order, chi3 = (3 * chi) % order;
                C over_classes{0.0, 0.0};
                for (const auto& c : reps) {
                    const auto u = static_cast<std::int64_t>(c.u), v = static_cast<std::int64_t>(c.v);
                    over_classes += quartic(u, -k) * std::conj(G(chi3, u)) * G(chi2, v);
                }
                if (std::norm(over_classes) == 0.0) continue;
                C over_a{0.0, 0.0};
                for (std::int64_t a = -A; a <= A; ++a) over_a += quartic(a, k) * G(chi3, a);
                C over_b{0.0, 0.0};
                for (std::int64_t b = -B; b <= B; ++b) over_b += std::conj(G(chi2, b));
                total += over_classes * over_a * over_b;
            }
        }
    } else {
        const std::size_t legendre = order / 2;
        for (const auto& c : reps) {
            const auto u = static_cast<std::int64_t>(c.u), v = static_cast<std::int64_t>(c.v);
            const C ru = G(legendre, u), rv = G(legendre, v);
            for (std::size_t chi = 0; chi < order; ++chi) {
                const std::size_t chi2 = (2 * chi) % order, chi3 = (3 * chi) % order;
                C over_a{0.0, 0.0};
                for (std::int64_t a = -A; a <= A; ++a) over_a += (G(0, a) + G(legendre, a) * ru) * G(chi3, a);
                C over_b{0.0, 0.0};
                for (std::int64_t b = -B; b <= B; ++b) over_b += (G(0, b) + G(legendre, b) * rv) * std::conj(G(chi2, b));
                total += std::conj(G(chi3, u)) * G(chi2, v) * over_a * over_b;
            }
        }
    }
    return total.real() / (4.0 * static_cast<double>(p - 1));
}

}  // namespace satotate::curves
