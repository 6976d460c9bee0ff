#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "satotate/error.hpp"
#include "satotate/lconstants/cfr.hpp"
#include "satotate/lconstants/euler.hpp"
#include "satotate/numeric/summation.hpp"
#include "satotate/numthy/primes.hpp"

namespace satotate::lconstants {

inline constexpr std::uint64_t window_sum_cutoff = 100000;

namespace detail {

inline std::vector<std::uint64_t> phi_table(std::uint64_t n) {
    std::vector<std::uint64_t> phi(n + 1);
    std::iota(phi.begin(), phi.end(), std::uint64_t{0});
    for (std::uint64_t i = 2; i <= n; ++i)
        if (phi[i] == i)
            for (std::uint64_t j = i; j <= n; j += i) phi[j] -= phi[j] / i;
    return phi;
}

}  // namespace detail

/// S(U, V, r) = sum_{n<=U} sum_{f<=V, (2r,f)=1} c_f^r(n) / (f n phi(n f^2)).
/// Terms are added in ascending (n, f) order.
inline double partial_sum_S(std::uint64_t U, std::uint64_t V, std::uint64_t r) {
    if (U < 1 || V < 1) throw DomainError("partial_sum_S needs U, V >= 1");
    if (r < 1 || r % 2 == 0) throw DomainError("partial_sum_S needs odd r >= 1");
    const auto phi = detail::phi_table(std::max(U, V));
    std::vector<std::uint64_t> fs;
    for (std::uint64_t f = 1; f <= V; ++f)
        if (std::gcd(f, 2 * r) == 1) fs.push_back(f);

    numeric::CompensatedSum sum;
    for (std::uint64_t n = 1; n <= U; ++n) {
        const auto factors = numthy::factorize(n);
        for (const auto f : fs) {
            std::int64_t c = 1;
            unsigned e2 = 0;
            for (const auto& pp : factors) {
                if (pp.prime == 2) {
                    e2 = static_cast<unsigned>(pp.exponent);
                    continue;
                }
                c *= c_local_odd(pp.prime, static_cast<unsigned>(pp.exponent), f, r);
                if (c == 0) break;
            }
            if (c == 0) continue;
            c *= c_local_two(e2, f, r);
            // phi(n f^2) = phi(n) phi(f^2) g / phi(g) with g = gcd(n, f^2)
            const auto g = std::gcd(n, f * f);
            const auto phi_nf2 = phi[n] * f * phi[f] / phi[g] * g;
            sum += static_cast<double>(c) /
                   (static_cast<double>(f) * static_cast<double>(n) * static_cast<double>(phi_nf2));
        }
    }
    return sum.value();
}

/// sum_{u < r <= u+v} K_r with K_r truncated at window_sum_cutoff.
inline double k_window_sum(std::uint64_t u, std::uint64_t v, const numthy::PrimeTable& primes) {
    if (v < 1) throw DomainError("k_window_sum needs v >= 1");
    numeric::CompensatedSum sum;
    for (std::uint64_t r = u + 1; r <= u + v; ++r) sum += k_r(r, primes, window_sum_cutoff).value;
    return sum.value();
}

inline double k_window_sum(std::uint64_t u, std::uint64_t v) {
    return k_window_sum(u, v, numthy::sieve_primes(window_sum_cutoff));
}

}  // namespace satotate::lconstants
