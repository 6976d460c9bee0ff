#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "satotate/error.hpp"
#include "satotate/numeric/summation.hpp"
#include "satotate/numthy/modarith.hpp"
#include "satotate/numthy/primes.hpp"
#include "satotate/parallel.hpp"

namespace satotate::progressions {

/// Primes p in (x, x+y] with p = a (mod q). For q = 1 every prime counts.
struct APWindow {
    double x = 0.0;
    double y = 1.0;
    std::uint64_t q = 1;
    std::int64_t a = 0;
};

namespace detail {

inline void require_table(const numthy::PrimeTable& primes, double hi) {
    if (static_cast<double>(primes.limit()) < std::floor(hi))
        throw RangeError("prime table up to " + std::to_string(primes.limit()) + " does not cover " +
                         std::to_string(hi));
}

inline void require_window(const APWindow& w) {
    if (w.q < 1) throw DomainError("modulus q must be positive");
    if (!(w.x >= 0.0) || !(w.y > 0.0)) throw DomainError("window needs x >= 0 and y > 0");
}

inline numthy::PrimeTable table_for(double hi) {
    return numthy::sieve_primes(std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::floor(hi))));
}

}  // namespace detail

/// Theta accumulated in 2^-32 fixed point; adjacent windows add exactly.
inline numeric::FixedLogSum theta_ap_fixed(const APWindow& w, const numthy::PrimeTable& primes) {
    detail::require_window(w);
    detail::require_table(primes, w.x + w.y);
    const auto residue = numthy::reduce(w.a, w.q);
    const auto [lo, hi] = primes.window(w.x, w.x + w.y);
    numeric::FixedLogSum sum;
    for (auto i = lo; i < hi; ++i)
        if (primes[i].p % w.q == residue) sum.add(primes[i].logp);
    return sum;
}

inline double theta_ap(const APWindow& w, const numthy::PrimeTable& primes) {
    return theta_ap_fixed(w, primes).value();
}

inline double theta_ap(const APWindow& w) {
    detail::require_window(w);
    return theta_ap(w, detail::table_for(w.x + w.y));
}

/// E(x, y; q, a) = Theta(x, y; q, a) - y / phi(q).
inline double e_ap(const APWindow& w, const numthy::PrimeTable& primes) {
    detail::require_window(w);
    if (std::gcd(numthy::reduce(w.a, w.q), w.q) != 1 && w.q > 1)
        throw DomainError("e_ap needs gcd(a, q) = 1, got a=" + std::to_string(w.a) + " q=" + std::to_string(w.q));
    return theta_ap(w, primes) - w.y / static_cast<double>(numthy::euler_phi(w.q));
}

inline double e_ap(const APWindow& w) {
    detail::require_window(w);
    return e_ap(w, detail::table_for(w.x + w.y));
}

/// sum_{a mod q, (a,q)=1} E(x, y; q, a)^2 for one modulus.
inline double bdh_term(double x, double y, std::uint64_t q, const numthy::PrimeTable& primes) {
    const auto [lo, hi] = primes.window(x, x + y);
    std::vector<numeric::FixedLogSum> theta(q);
    for (auto i = lo; i < hi; ++i) theta[primes[i].p % q].add(primes[i].logp);
    const double expected = y / static_cast<double>(numthy::euler_phi(q));
    numeric::CompensatedSum sum;
    for (std::uint64_t a = 0; a < q; ++a) {
        if (q > 1 && std::gcd(a, q) != 1) continue;
        const double e = theta[a].value() - expected;
        sum += e * e;
    }
    return sum.value();
}

/// sum_{q<=Q} sum_{(a,q)=1} |E(x, y; q, a)|^2, reduced in ascending q.
inline double bdh_moment(double x, double y, std::uint64_t Q, const numthy::PrimeTable& primes, unsigned workers = 1) {
    if (Q < 1) throw DomainError("bdh_moment needs Q >= 1");
    detail::require_window({x, y, 1, 0});
    detail::require_table(primes, x + y);
    std::vector<double> terms(Q);
    parallel_for(Q, workers, [&](std::size_t i) { terms[i] = bdh_term(x, y, i + 1, primes); });
    return numeric::compensated_sum(terms);
}

inline double bdh_moment(double x, double y, std::uint64_t Q, unsigned workers = 1) {
    detail::require_window({x, y, 1, 0});
    return bdh_moment(x, y, Q, detail::table_for(x + y), workers);
}

/// bdh_moment / (Q y log^2 x), the shape ratio reported by trend runs.
inline double bdh_shape_ratio(double moment, double x, double y, std::uint64_t Q) {
    const double lx = std::log(x);
    return moment / (static_cast<double>(Q) * y * lx * lx);
}

}  // namespace satotate::progressions
