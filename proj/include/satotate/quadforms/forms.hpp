#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "satotate/error.hpp"

namespace satotate::quadforms {

/// Negative integer D with D = 0 or 1 (mod 4).
class Discriminant {
public:
    explicit Discriminant(std::int64_t d) : d_(d) {
        if (!is_valid(d)) throw DomainError("invalid negative discriminant " + std::to_string(d));
    }

    static bool is_valid(std::int64_t d) noexcept {
        if (d >= 0) return false;
        const std::int64_t r = ((d % 4) + 4) % 4;
        return r == 0 || r == 1;
    }

    std::int64_t value() const noexcept { return d_; }
    std::uint64_t abs() const noexcept { return static_cast<std::uint64_t>(-d_); }

    friend bool operator==(const Discriminant&, const Discriminant&) = default;

private:
    std::int64_t d_;
};

/// Ax^2 + Bxy + Cy^2.
struct FormTriple {
    std::int64_t A, B, C;

    std::int64_t discriminant() const noexcept { return B * B - 4 * A * C; }
    bool is_primitive() const noexcept { return std::gcd(std::gcd(A, B), C) == 1; }

    bool is_reduced() const noexcept {
        const std::int64_t absB = B < 0 ? -B : B;
        if (A <= 0 || absB > A || A > C) return false;
        if ((absB == A || A == C) && B < 0) return false;
        return true;
    }

    friend bool operator==(const FormTriple&, const FormTriple&) = default;
};

struct DecompositionTerm {
    std::int64_t d;
    std::int64_t f;

    friend bool operator==(const DecompositionTerm&, const DecompositionTerm&) = default;
};

/// All (d, f) with D = d f^2 and d a discriminant, ordered by increasing f.
inline std::vector<DecompositionTerm> decompose(Discriminant D) {
    std::vector<DecompositionTerm> out;
    const std::int64_t v = D.value();
    for (std::int64_t f = 1; f * f <= -v; ++f) {
        if (v % (f * f) != 0) continue;
        const std::int64_t d = v / (f * f);
        if (Discriminant::is_valid(d)) out.push_back({d, f});
    }
    return out;
}

namespace detail {

template <class Visit>
void for_each_reduced_form(Discriminant D, Visit&& visit) {
    const std::int64_t v = D.value();
    const std::int64_t n = -v;
    for (std::int64_t A = 1; 3 * A * A <= n; ++A) {
        // B has the parity of D; B in (-A, A].
        std::int64_t B = -A + 1;
        if (((B - v) & 1) != 0) ++B;
        for (; B <= A; B += 2) {
            const std::int64_t num = B * B - v;
            if (num % (4 * A) != 0) continue;
            const std::int64_t C = num / (4 * A);
            if (C < A) continue;
            if (B < 0 && C == A) continue;
            visit(FormTriple{A, B, C});
        }
    }
}

}  // namespace detail

/// Every reduced positive definite form of discriminant D, imprimitive included.
inline std::vector<FormTriple> enumerate_reduced_forms(Discriminant D) {
    std::vector<FormTriple> out;
    detail::for_each_reduced_form(D, [&](const FormTriple& f) { out.push_back(f); });
    return out;
}

/// H(D): the number of reduced forms of discriminant D, imprimitive included.
inline std::uint64_t reduced_form_count(Discriminant D) {
    std::uint64_t count = 0;
    detail::for_each_reduced_form(D, [&](const FormTriple&) { ++count; });
    return count;
}

/// h(D): reduced forms with gcd(A, B, C) = 1.
inline std::uint64_t primitive_form_count(Discriminant D) {
    std::uint64_t count = 0;
    detail::for_each_reduced_form(D, [&](const FormTriple& f) { count += f.is_primitive() ? 1 : 0; });
    return count;
}

/// H(-n) for every n <= limit at once, by walking all reduced forms with
/// 4AC - B^2 <= limit. Entries for n = 1, 2 (mod 4) stay zero.
inline std::vector<std::uint32_t> reduced_form_counts_upto(std::uint64_t limit) {
    std::vector<std::uint32_t> counts(limit + 1, 0);
    const auto n = static_cast<std::int64_t>(limit);
    for (std::int64_t A = 1; 3 * A * A <= n; ++A) {
        for (std::int64_t B = -A + 1; B <= A; ++B) {
            std::int64_t C = (B < 0) ? A + 1 : A;
            for (std::int64_t disc = 4 * A * C - B * B; disc <= n; disc += 4 * A) ++counts[disc];
        }
    }
    return counts;
}

}  // namespace satotate::quadforms
