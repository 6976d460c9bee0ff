#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <new>
#include <span>
#include <string>
#include <vector>

#include "satotate/error.hpp"

namespace satotate::numthy {

struct PrimeEntry {
    std::uint64_t p;
    double logp;

    friend bool operator==(const PrimeEntry&, const PrimeEntry&) = default;
};

/// The primes up to a limit together with their natural logarithms.
class PrimeTable {
public:
    /// Largest supported limit; traces and residues use 64-bit products of
    /// values below 2^32.
    static constexpr std::uint64_t max_limit = (1ull << 32) - 1;

    PrimeTable() = default;
    PrimeTable(std::uint64_t limit, std::vector<PrimeEntry> entries)
        : limit_(limit), entries_(std::move(entries)) {}

    std::uint64_t limit() const noexcept { return limit_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const PrimeEntry& operator[](std::size_t i) const { return entries_[i]; }
    std::span<const PrimeEntry> entries() const noexcept { return entries_; }
    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }

    /// Index of the first prime strictly greater than v.
    std::size_t upper_index(double v) const noexcept {
        return static_cast<std::size_t>(
            std::upper_bound(entries_.begin(), entries_.end(), v,
                             [](double x, const PrimeEntry& e) { return x < static_cast<double>(e.p); }) -
            entries_.begin());
    }

    /// Number of primes <= v.
    std::size_t count_upto(double v) const noexcept { return upper_index(v); }

    /// Index range [first, last) of primes in the half-open window (lo, hi].
    std::pair<std::size_t, std::size_t> window(double lo, double hi) const noexcept {
        return {upper_index(lo), upper_index(hi)};
    }

    bool contains(std::uint64_t p) const noexcept {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), p,
                                   [](const PrimeEntry& e, std::uint64_t v) { return e.p < v; });
        return it != entries_.end() && it->p == p;
    }

    /// Primes in the residue class a mod q, in increasing order.
    std::vector<PrimeEntry> in_class(std::uint64_t q, std::uint64_t a) const {
        std::vector<PrimeEntry> out;
        for (const auto& e : entries_)
            if (e.p % q == a % q) out.push_back(e);
        return out;
    }

    friend bool operator==(const PrimeTable&, const PrimeTable&) = default;

private:
    std::uint64_t limit_ = 0;
    std::vector<PrimeEntry> entries_;
};

/// Sieve of Eratosthenes over odd numbers.
inline PrimeTable sieve_primes(std::uint64_t x) {
    if (x < 1) throw DomainError("sieve_primes: limit must be >= 1");
    if (x > PrimeTable::max_limit)
        throw ResourceError("sieve_primes: limit " + std::to_string(x) + " exceeds capacity");
    std::vector<PrimeEntry> entries;
    try {
        if (x >= 2) entries.push_back({2, std::log(2.0)});
        const std::uint64_t half = (x - 1) / 2;  // odd numbers 3,5,...,<=x map to 1..half
        std::vector<bool> composite(half + 1, false);
        for (std::uint64_t i = 1; i <= half; ++i) {
            if (composite[i]) continue;
            const std::uint64_t p = 2 * i + 1;
            entries.push_back({p, std::log(static_cast<double>(p))});
            for (std::uint64_t m = p * p; m <= x; m += 2 * p) composite[(m - 1) / 2] = true;
        }
    } catch (const std::bad_alloc&) {
        throw ResourceError("sieve_primes: out of memory for limit " + std::to_string(x));
    }
    return PrimeTable(x, std::move(entries));
}

}  // namespace satotate::numthy
