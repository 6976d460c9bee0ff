#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <vector>

#include "satotate/error.hpp"
#include "satotate/numeric/summation.hpp"
#include "satotate/numthy/symbols.hpp"
#include "satotate/quadforms/forms.hpp"

namespace satotate::quadforms {

struct TruncatedL {
    double value;
    double tail_bound;
};

/// Partial sum of L(1, chi_d) over n <= U, with the character-sum tail
/// estimate 4 sqrt|d| ln|d| / U (partial summation times the Polya-Vinogradov
/// constant 2).
inline TruncatedL l1_truncated(Discriminant d, std::uint64_t U) {
    if (U == 0) throw DomainError("l1_truncated: U must be positive");
    const std::uint64_t period = d.abs();
    // (d | n) is periodic in n with period |d| for discriminants d.
    std::vector<std::int8_t> chi(period);
    for (std::uint64_t n = 0; n < period; ++n)
        chi[n] = static_cast<std::int8_t>(numthy::kronecker(d.value(), static_cast<std::int64_t>(n == 0 ? period : n)));
    numeric::CompensatedSum sum;
    std::uint64_t residue = 1 % period;
    for (std::uint64_t n = 1; n <= U; ++n) {
        if (const int c = chi[residue]; c != 0) sum.add(c / static_cast<double>(n));
        if (++residue == period) residue = 0;
    }
    const double ad = static_cast<double>(period);
    return {sum.value(), 4.0 * std::sqrt(ad) * std::log(ad) / static_cast<double>(U)};
}

/// Each class of discriminant d contributes 2/w(d) to sqrt|d| L(1,chi_d)/pi,
/// where w(d) counts the units of the order. Counting every form once
/// (which is what F_p-isomorphism classes of curves do) therefore weights
/// the d = -3 term by 3 and the d = -4 term by 2.
inline int unit_weight(std::int64_t d) noexcept {
    if (d == -3) return 3;
    if (d == -4) return 2;
    return 1;
}

enum class ClassNumberMode { forms, lseries };

struct LSeriesEvaluation {
    double value;       // before rounding
    double tail_bound;  // accumulated truncation estimate, < 0.4
    std::uint64_t U;
};

/// (1/pi) sum over D = d f^2 of weight(d) sqrt|d| L(1, chi_d), truncated at
/// the smallest U whose accumulated tail estimate is below 0.4.
inline LSeriesEvaluation class_number_lseries(Discriminant D) {
    constexpr double tail_budget = 0.4;
    const auto terms = decompose(D);
    double need = 0.0;
    for (const auto& t : terms) {
        const double ad = static_cast<double>(-t.d);
        // weight * sqrt|d| * 4 sqrt|d| ln|d| / U / pi summed over terms
        need += unit_weight(t.d) * 4.0 * ad * std::log(ad) / std::numbers::pi;
    }
    const auto U = static_cast<std::uint64_t>(std::floor(need / tail_budget)) + 1;
    numeric::CompensatedSum value;
    numeric::CompensatedSum tail;
    for (const auto& t : terms) {
        const Discriminant d(t.d);
        const auto l = l1_truncated(d, U);
        const double w = unit_weight(t.d) * std::sqrt(static_cast<double>(d.abs())) / std::numbers::pi;
        value.add(w * l.value);
        tail.add(w * l.tail_bound);
    }
    return {value.value(), tail.value(), U};
}

inline std::uint64_t kronecker_class_number(Discriminant D, ClassNumberMode mode) {
    if (mode == ClassNumberMode::forms) return reduced_form_count(D);
    const auto ev = class_number_lseries(D);
    const double rounded = std::round(ev.value);
    if (std::fabs(ev.value - rounded) > 0.4 || rounded < 0) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "kronecker_class_number: L-series value " << ev.value << " for D=" << D.value()
            << " is not within 0.4 of an integer (U=" << ev.U << ")";
        throw ConsistencyError(msg.str());
    }
    return static_cast<std::uint64_t>(rounded);
}

}  // namespace satotate::quadforms
