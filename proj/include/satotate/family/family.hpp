#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "satotate/curves/classes.hpp"
#include "satotate/curves/theta.hpp"
#include "satotate/error.hpp"
#include "satotate/family/measure.hpp"
#include "satotate/interval.hpp"
#include "satotate/numeric/summation.hpp"
#include "satotate/numthy/primes.hpp"
#include "satotate/parallel.hpp"
#include "satotate/quadforms/htable.hpp"

namespace satotate::family {

/// Curves E(a, b) with |a| <= A, |b| <= B.
struct BoxSpec {
    std::int64_t A = 1;
    std::int64_t B = 1;

    static BoxSpec make(std::int64_t A, std::int64_t B) {
        if (A < 1 || B < 1) throw DomainError("box needs A, B >= 1");
        return {A, B};
    }

    std::uint64_t width() const noexcept { return static_cast<std::uint64_t>(2 * B + 1); }
    std::uint64_t cardinality() const noexcept { return static_cast<std::uint64_t>(2 * A + 1) * width(); }
    double normalization() const noexcept { return 4.0 * static_cast<double>(A) * static_cast<double>(B); }

    curves::CurveParams curve(std::uint64_t i) const noexcept {
        return {static_cast<std::int64_t>(i / width()) - A, static_cast<std::int64_t>(i % width()) - B};
    }
};

enum class AveragePath { per_curve, per_residue };

inline constexpr std::uint64_t per_residue_limit = 512;

struct SweepOptions {
    curves::Backend backend = curves::Backend::automatic;
    std::uint64_t bsgs_threshold = curves::default_bsgs_threshold;
    unsigned workers = 1;
};

/// Result of one pass over the box. counts[i] is the number of curves in
/// the box with good reduction at primes[i] and normalized trace in the
/// window; theta holds each curve's Theta in box order (per_curve only).
struct FamilySweep {
    BoxSpec box;
    IntervalSpec iv;
    std::uint64_t x = 0;
    AveragePath path = AveragePath::per_curve;
    std::vector<std::uint64_t> primes;
    std::vector<double> logp;
    std::vector<std::uint64_t> counts;
    std::vector<double> theta;
    double weighted_sum = 0.0;

    double average() const noexcept { return weighted_sum / box.normalization(); }
};

namespace detail {

inline numthy::PrimeTable family_primes(std::uint64_t x) {
    return x < 2 ? numthy::PrimeTable(x, {}) : numthy::sieve_primes(x);
}

inline FamilySweep empty_sweep(const BoxSpec& box, const IntervalSpec& iv, std::uint64_t x, AveragePath path,
                               const numthy::PrimeTable& primes) {
    FamilySweep s{box, iv, x, path, {}, {}, {}, {}, 0.0};
    for (const auto& e : primes) {
        s.primes.push_back(e.p);
        s.logp.push_back(e.logp);
    }
    s.counts.assign(primes.size(), 0);
    return s;
}

// sum over primes of log p * count, in increasing p
inline double weighted_counts(const FamilySweep& s) {
    numeric::CompensatedSum sum;
    for (std::size_t i = 0; i < s.primes.size(); ++i) sum += s.logp[i] * static_cast<double>(s.counts[i]);
    return sum.value();
}

// #{n in [-N, N] : n = residue mod p}
inline std::uint64_t multiplicity(std::int64_t N, std::uint64_t residue, std::uint64_t p) {
    const auto P = static_cast<std::int64_t>(p);
    const auto r = static_cast<std::int64_t>(residue);
    auto floor_div = [](std::int64_t a, std::int64_t b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
    return static_cast<std::uint64_t>(floor_div(N - r, P) - floor_div(-N - 1 - r, P));
}

}  // namespace detail

/// Iterates curves, computing every trace.
inline FamilySweep sweep_per_curve(const BoxSpec& box, const IntervalSpec& iv, std::uint64_t x,
                                   const SweepOptions& opt = {}) {
    const auto primes = detail::family_primes(x);
    auto s = detail::empty_sweep(box, iv, x, AveragePath::per_curve, primes);
    const auto n = box.cardinality();
    s.theta.assign(n, 0.0);
    if (primes.empty()) return s;
    const curves::TraceEngine engine(primes, opt.backend, opt.bsgs_threshold);

    // Fixed chunking keeps the integer tallies independent of scheduling.
    const std::size_t chunk = 64;
    const std::size_t chunks = (n + chunk - 1) / chunk;
    std::vector<std::vector<std::uint32_t>> tallies(chunks);
    parallel_for(chunks, opt.workers, [&](std::size_t c) {
        auto& tally = tallies[c];
        tally.assign(primes.size(), 0);
        const auto hi = std::min<std::uint64_t>(n, (c + 1) * chunk);
        for (std::uint64_t i = c * chunk; i < hi; ++i) {
            const auto E = box.curve(i);
            numeric::CompensatedSum theta;
            for (std::size_t k = 0; k < primes.size(); ++k) {
                if (!E.good_reduction(primes[k].p)) continue;
                if (!iv.contains(engine.trace(E, k).normalized)) continue;
                theta += primes[k].logp;
                ++tally[k];
            }
            s.theta[i] = theta.value();
        }
    });
    for (const auto& tally : tallies)
        for (std::size_t k = 0; k < tally.size(); ++k) s.counts[k] += tally[k];
    s.weighted_sum = numeric::compensated_sum(s.theta);
    return s;
}

/// Iterates primes, classifying residue pairs once and weighting them by
/// how often each residue occurs in the box. Limited to x <= 512.
inline FamilySweep sweep_per_residue(const BoxSpec& box, const IntervalSpec& iv, std::uint64_t x,
                                     const SweepOptions& opt = {}) {
    if (x > per_residue_limit)
        throw DomainError("per_residue path is limited to x <= " + std::to_string(per_residue_limit));
    const auto primes = detail::family_primes(x);
    auto s = detail::empty_sweep(box, iv, x, AveragePath::per_residue, primes);
    parallel_for(primes.size(), opt.workers, [&](std::size_t k) {
        const auto p = primes[k].p;
        if (p == 2) return;  // every curve is bad at 2
        const curves::TraceTable table(p);
        std::vector<std::uint64_t> na(p), nb(p);
        for (std::uint64_t r = 0; r < p; ++r) {
            na[r] = detail::multiplicity(box.A, r, p);
            nb[r] = detail::multiplicity(box.B, r, p);
        }
        std::uint64_t count = 0;
        for (std::uint64_t a = 0; a < p; ++a)
            for (std::uint64_t b = 0; b < p; ++b) {
                if (table.is_singular(a, b)) continue;
                if (iv.contains(normalized_trace(table(a, b), p))) count += na[a] * nb[b];
            }
        s.counts[k] = count;
    });
    s.weighted_sum = detail::weighted_counts(s);
    return s;
}

inline FamilySweep family_sweep(const BoxSpec& box, const IntervalSpec& iv, std::uint64_t x, AveragePath path,
                                const SweepOptions& opt = {}) {
    return path == AveragePath::per_curve ? sweep_per_curve(box, iv, x, opt) : sweep_per_residue(box, iv, x, opt);
}

/// (1/4AB) * sum over the box of Theta_E(alpha, beta; x).
inline double family_average(const BoxSpec& box, const IntervalSpec& iv, std::uint64_t x, AveragePath path,
                             const SweepOptions& opt = {}) {
    return family_sweep(box, iv, x, path, opt).average();
}

/// Throws ConsistencyError naming the first prime whose in-window counts
/// differ, or when the weighted sums differ by more than 1e-9 relative.
inline void check_paths_agree(const FamilySweep& a, const FamilySweep& b) {
    if (a.primes != b.primes) throw ConsistencyError("family paths cover different primes");
    for (std::size_t k = 0; k < a.primes.size(); ++k)
        if (a.counts[k] != b.counts[k])
            throw ConsistencyError("family paths disagree at p=" + std::to_string(a.primes[k]) + ": " +
                                   std::to_string(a.counts[k]) + " vs " + std::to_string(b.counts[k]));
    const double scale = std::max({1.0, std::fabs(a.weighted_sum), std::fabs(b.weighted_sum)});
    if (std::fabs(a.weighted_sum - b.weighted_sum) > 1e-9 * scale)
        throw ConsistencyError("family paths disagree on the weighted sum");
}

/// Runs both paths and returns the per_curve sweep after checking agreement.
inline FamilySweep family_sweep_checked(const BoxSpec& box, const IntervalSpec& iv, std::uint64_t x,
                                        const SweepOptions& opt = {}) {
    auto by_curve = sweep_per_curve(box, iv, x, opt);
    check_paths_agree(by_curve, sweep_per_residue(box, iv, x, opt));
    return by_curve;
}

/// sum over p <= x of log p * sum over window traces r of H(r^2 - 4p) / (2p).
inline double main_term(std::uint64_t x, const IntervalSpec& iv, const quadforms::ClassNumberTable& table) {
    if (x < 2) return 0.0;
    if (table.limit() < x) throw RangeError("class-number table (limit " + std::to_string(table.limit()) +
                                            ") does not cover x=" + std::to_string(x));
    numeric::CompensatedSum sum;
    for (const auto p : table.primes()) {
        if (p > x) break;
        const auto h = quadforms::h_p_sum(table, p, iv);
        sum += std::log(static_cast<double>(p)) * static_cast<double>(h) / (2.0 * static_cast<double>(p));
    }
    return sum.value();
}

inline double main_term(std::uint64_t x, const IntervalSpec& iv) {
    if (x < 2) return 0.0;
    return main_term(x, iv, quadforms::h_table(x));
}

/// x * F(alpha, beta).
inline double expected_theta(std::uint64_t x, const IntervalSpec& iv) {
    return static_cast<double>(x) * f_measure(iv.alpha, iv.beta);
}

struct SecondMoment {
    double direct = 0.0;      // (1/4AB) sum (Theta_E - xF)^2
    double decomposed = 0.0;  // (N/4AB) (mean of squares - mu^2 + (mu - xF)^2)
    double mean = 0.0;        // mu over the N lattice points
};

/// Second moment of Theta about xF, computed directly and through the
/// mean-of-squares identity; disagreement beyond 1e-9 relative throws.
inline SecondMoment second_moment(const std::vector<double>& theta, const BoxSpec& box, double xF) {
    if (theta.size() != box.cardinality()) throw DomainError("second_moment needs one Theta per curve in the box");
    const auto N = static_cast<double>(theta.size());
    std::vector<double> centered(theta.size()), squares(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        centered[i] = (theta[i] - xF) * (theta[i] - xF);
        squares[i] = theta[i] * theta[i];
    }
    SecondMoment m;
    m.direct = numeric::compensated_sum(centered) / box.normalization();
    m.mean = numeric::compensated_sum(theta) / N;
    const double variance = std::max(0.0, numeric::compensated_sum(squares) / N - m.mean * m.mean);
    m.decomposed = N / box.normalization() * (variance + (m.mean - xF) * (m.mean - xF));
    const double scale = std::max({1.0, std::fabs(m.direct), std::fabs(m.decomposed)});
    if (std::fabs(m.direct - m.decomposed) > 1e-9 * scale)
        throw ConsistencyError("second moment: direct " + std::to_string(m.direct) + " vs decomposition " +
                               std::to_string(m.decomposed));
    return m;
}

/// Curves with |Theta_E - xF| > rel_tol * xF.
inline std::uint64_t exceptional_count(const std::vector<double>& theta, double xF, double rel_tol) {
    if (!(rel_tol > 0.0)) throw DomainError("exceptional_count needs rel_tol > 0");
    if (std::isinf(rel_tol)) return 0;
    const double band = rel_tol * xF;
    return static_cast<std::uint64_t>(
        std::count_if(theta.begin(), theta.end(), [&](double t) { return std::fabs(t - xF) > band; }));
}

struct ExperimentReport {
    std::uint64_t x = 0;
    BoxSpec box;
    IntervalSpec iv;
    double rel_tol = 0.0;
    double average = 0.0;
    double main_term = 0.0;
    double xF = 0.0;
    double second_moment = 0.0;
    std::uint64_t exceptional_count = 0;
    std::vector<std::uint64_t> primes;
    std::vector<std::uint64_t> counts;
};

/// One full run over the box with the per_curve path.
inline ExperimentReport run_experiment(const BoxSpec& box, const IntervalSpec& iv, std::uint64_t x, double rel_tol,
                                       const SweepOptions& opt = {}) {
    const auto sweep = sweep_per_curve(box, iv, x, opt);
    ExperimentReport rep;
    rep.x = x;
    rep.box = box;
    rep.iv = iv;
    rep.rel_tol = rel_tol;
    rep.average = sweep.average();
    rep.main_term = main_term(x, iv);
    rep.xF = expected_theta(x, iv);
    rep.second_moment = second_moment(sweep.theta, box, rep.xF).direct;
    rep.exceptional_count = exceptional_count(sweep.theta, rep.xF, rel_tol);
    rep.primes = sweep.primes;
    rep.counts = sweep.counts;
    return rep;
}

}  // namespace satotate::family
