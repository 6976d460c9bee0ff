#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "satotate/curves/curve.hpp"
#include "satotate/curves/trace.hpp"
#include "satotate/interval.hpp"
#include "satotate/numeric/summation.hpp"
#include "satotate/numthy/primes.hpp"
#include "satotate/numthy/symbols.hpp"

namespace satotate::curves {

/// Trace computation over a fixed list of primes. Residue tables for the
/// naive backend are built once, up to `table_cap`, and shared read-only
/// by every curve in a sweep.
class TraceEngine {
public:
    TraceEngine(const numthy::PrimeTable& primes, Backend backend, std::uint64_t bsgs_threshold = default_bsgs_threshold,
                std::uint64_t table_cap = 20'000)
        : primes_(&primes), backend_(backend), threshold_(bsgs_threshold) {
        tables_.resize(primes.size());
        for (std::size_t i = 0; i < primes.size(); ++i) {
            const auto p = primes[i].p;
            if (p > 3 && p <= table_cap && uses_naive(p)) tables_[i] = std::make_unique<numthy::ResidueTable>(p);
        }
    }

    const numthy::PrimeTable& primes() const noexcept { return *primes_; }
    Backend backend() const noexcept { return backend_; }

    bool uses_naive(std::uint64_t p) const noexcept {
        return backend_ == Backend::naive || (backend_ == Backend::automatic && p <= threshold_);
    }

    /// Trace of E at the i-th prime; E must have good reduction there.
    TraceResult trace(const CurveParams& E, std::size_t i) const {
        const auto p = (*primes_)[i].p;
        if (p <= 3 || !uses_naive(p)) return trace_bsgs(E, p);
        if (tables_[i]) return trace_naive(E, *tables_[i]);
        return trace_naive(E, p);
    }

private:
    const numthy::PrimeTable* primes_;
    Backend backend_;
    std::uint64_t threshold_;
    std::vector<std::unique_ptr<numthy::ResidueTable>> tables_;
};

/// Sum of log p over good primes p <= x (the engine's primes) with
/// normalized trace in the window, accumulated in increasing p.
inline double theta_curve(const CurveParams& E, const IntervalSpec& iv, const TraceEngine& engine) {
    numeric::CompensatedSum sum;
    const auto& primes = engine.primes();
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const auto p = primes[i].p;
        if (!E.good_reduction(p)) continue;
        if (iv.contains(engine.trace(E, i).normalized)) sum.add(primes[i].logp);
    }
    return sum.value();
}

inline double theta_curve(const CurveParams& E, const IntervalSpec& iv, std::uint64_t x,
                          Backend backend = Backend::automatic) {
    const auto primes = numthy::sieve_primes(x);
    return theta_curve(E, iv, TraceEngine(primes, backend));
}

}  // namespace satotate::curves
