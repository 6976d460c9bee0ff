#pragma once

#include <boost/rational.hpp>
#include <cmath>
#include <cstdint>
#include <vector>

#include "satotate/error.hpp"
#include "satotate/numeric/summation.hpp"
#include "satotate/numthy/modarith.hpp"
#include "satotate/numthy/primes.hpp"

namespace satotate::lconstants {

using Rational = boost::rational<std::int64_t>;

/// Euler product truncated at primes <= cutoff. tail_bound bounds the
/// absolute distance to the full product.
struct TruncatedProduct {
    double value = 0.0;
    std::uint64_t cutoff = 0;
    double tail_bound = 0.0;
};

namespace detail {

inline void require_cutoff(std::uint64_t cutoff) {
    if (cutoff < 3) throw DomainError("Euler product cutoff must be at least 3");
}

// Each omitted factor lies in [1 - t, 1] with sum of t over l > L at most
// 1/L^2, so the omitted log is at most 1/L^2 + (1/L^2)^2. A rounding
// allowance covers the log-space accumulation.
inline double tail_from_log(double value, std::uint64_t cutoff, std::size_t terms) {
    const double L = static_cast<double>(cutoff);
    const double log_tail = 1.0 / (L * L) + 1.0 / (L * L * L * L);
    return value * (std::expm1(log_tail) + 4.0 * static_cast<double>(terms + 1) * 0x1p-52);
}

// log of l(l^2-l-1) / ((l-1)(l^2-1)) = log(1 - 1/(l^3-l^2-l+1))
inline double log_generic_factor(std::uint64_t l) {
    const double x = static_cast<double>(l);
    return std::log1p(-1.0 / (((x - 1.0) * x - 1.0) * x + 1.0));
}

// log of (1 - 1/l^2)^{-1}
inline double log_divisor_factor(std::uint64_t l) {
    const double x = static_cast<double>(l);
    return -std::log1p(-1.0 / (x * x));
}

}  // namespace detail

/// K_r with the primes <= cutoff taken from the table. Prime divisors of r
/// above the cutoff contribute their finite factor as well.
inline TruncatedProduct k_r(std::uint64_t r, const numthy::PrimeTable& primes, std::uint64_t cutoff) {
    if (r < 1) throw DomainError("K_r needs r >= 1");
    detail::require_cutoff(cutoff);
    if (primes.limit() < cutoff) throw DomainError("prime table shorter than the cutoff");
    const auto divisors = numthy::factorize(r);
    numeric::CompensatedSum log_sum;
    std::size_t terms = 0;
    auto d = divisors.begin();
    for (const auto& e : primes) {
        if (e.p > cutoff) break;
        while (d != divisors.end() && d->prime < e.p) ++d;
        const bool divides = d != divisors.end() && d->prime == e.p;
        log_sum += divides ? detail::log_divisor_factor(e.p) : detail::log_generic_factor(e.p);
        ++terms;
    }
    for (; d != divisors.end(); ++d) {
        if (d->prime <= cutoff) continue;
        log_sum += detail::log_divisor_factor(d->prime);
        ++terms;
    }
    const double value = std::exp(log_sum.value());
    return {value, cutoff, detail::tail_from_log(value, cutoff, terms)};
}

inline TruncatedProduct k_r(std::uint64_t r, std::uint64_t cutoff) {
    detail::require_cutoff(cutoff);
    return k_r(r, numthy::sieve_primes(cutoff), cutoff);
}

/// C = prod over l of (1 + 1/(l(l^2-l-1)))^{-1}.
inline TruncatedProduct c_constant(const numthy::PrimeTable& primes, std::uint64_t cutoff) {
    detail::require_cutoff(cutoff);
    if (primes.limit() < cutoff) throw DomainError("prime table shorter than the cutoff");
    numeric::CompensatedSum log_sum;
    std::size_t terms = 0;
    for (const auto& e : primes) {
        if (e.p > cutoff) break;
        const double x = static_cast<double>(e.p);
        log_sum += -std::log1p(1.0 / (x * ((x - 1.0) * x - 1.0)));
        ++terms;
    }
    const double value = std::exp(log_sum.value());
    return {value, cutoff, detail::tail_from_log(value, cutoff, terms)};
}

inline TruncatedProduct c_constant(std::uint64_t cutoff) {
    detail::require_cutoff(cutoff);
    return c_constant(numthy::sieve_primes(cutoff), cutoff);
}

/// f(r) = prod over l | r of (1 + 1/(l^2-l-1)).
inline Rational f_mult(std::uint64_t r) {
    if (r < 1) throw DomainError("f(r) needs r >= 1");
    Rational f(1);
    for (const auto& pp : numthy::factorize(r)) {
        const auto l = static_cast<std::int64_t>(pp.prime);
        f *= Rational(l * l - l, l * l - l - 1);
    }
    return f;
}

/// g(n) = mu(n)^2 / prod over l | n of (l^2-l-1), so that f(r) = sum_{d|r} g(d).
inline Rational g_mult(std::uint64_t n) {
    if (n < 1) throw DomainError("g(n) needs n >= 1");
    std::int64_t den = 1;
    for (const auto& pp : numthy::factorize(n)) {
        if (pp.exponent > 1) return Rational(0);
        const auto l = static_cast<std::int64_t>(pp.prime);
        den *= l * l - l - 1;
    }
    return Rational(1, den);
}

inline double to_double(const Rational& q) {
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

}  // namespace satotate::lconstants
