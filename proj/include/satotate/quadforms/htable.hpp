#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "satotate/error.hpp"
#include "satotate/interval.hpp"
#include "satotate/numthy/primes.hpp"
#include "satotate/parallel.hpp"
#include "satotate/quadforms/forms.hpp"
#include "satotate/quadforms/lseries.hpp"

namespace satotate::quadforms {

/// Largest r with r^2 < 4p, i.e. ceil(2 sqrt p) - 1 for prime p.
inline std::int64_t max_trace(std::uint64_t p) noexcept {
    auto r = static_cast<std::int64_t>(std::sqrt(4.0 * static_cast<double>(p)));
    while (static_cast<std::uint64_t>(r * r) >= 4 * p) --r;
    while (static_cast<std::uint64_t>((r + 1) * (r + 1)) < 4 * p) ++r;
    return r;
}

struct ClassNumberRecord {
    std::uint64_t p;
    std::uint32_t r;
    std::uint32_t H;

    friend bool operator==(const ClassNumberRecord&, const ClassNumberRecord&) = default;
};

/// H(r^2 - 4p) for every prime p <= limit and 0 < r < 2 sqrt p.
class ClassNumberTable {
public:
    ClassNumberTable() = default;

    /// Builds from records ordered by (p, r); throws IntegrityError when the
    /// records do not form a complete table.
    static ClassNumberTable from_records(std::uint64_t limit, const std::vector<ClassNumberRecord>& records) {
        ClassNumberTable t;
        t.limit_ = limit;
        const auto primes = numthy::sieve_primes(std::max<std::uint64_t>(limit, 1));
        std::size_t i = 0;
        for (const auto& e : primes) {
            t.primes_.push_back(e.p);
            t.offsets_.push_back(t.values_.size());
            const auto rmax = max_trace(e.p);
            for (std::int64_t r = 1; r <= rmax; ++r, ++i) {
                if (i >= records.size() || records[i].p != e.p || records[i].r != r)
                    throw IntegrityError("class-number records incomplete at (p=" + std::to_string(e.p) +
                                         ", r=" + std::to_string(r) + ")");
                t.values_.push_back(records[i].H);
            }
        }
        if (i != records.size()) throw IntegrityError("class-number records contain trailing entries");
        t.offsets_.push_back(t.values_.size());
        return t;
    }

    std::uint64_t limit() const noexcept { return limit_; }
    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<std::uint64_t>& primes() const noexcept { return primes_; }

    bool covers(std::uint64_t p) const noexcept {
        return p <= limit_ && std::binary_search(primes_.begin(), primes_.end(), p);
    }

    /// H(r^2 - 4p); depends on r only through r^2.
    std::uint32_t at(std::uint64_t p, std::int64_t r) const {
        const auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
        if (it == primes_.end() || *it != p)
            throw RangeError("class-number table (limit " + std::to_string(limit_) + ") does not cover p=" +
                             std::to_string(p));
        const auto idx = static_cast<std::size_t>(it - primes_.begin());
        const std::int64_t ar = r < 0 ? -r : r;
        const auto count = static_cast<std::int64_t>(offsets_[idx + 1] - offsets_[idx]);
        if (ar < 1 || ar > count)
            throw RangeError("trace r=" + std::to_string(r) + " outside 0 < |r| < 2 sqrt(" + std::to_string(p) + ")");
        return values_[offsets_[idx] + static_cast<std::size_t>(ar - 1)];
    }

    std::vector<ClassNumberRecord> records() const {
        std::vector<ClassNumberRecord> out;
        out.reserve(values_.size());
        for (std::size_t i = 0; i < primes_.size(); ++i)
            for (std::size_t j = offsets_[i]; j < offsets_[i + 1]; ++j)
                out.push_back({primes_[i], static_cast<std::uint32_t>(j - offsets_[i] + 1), values_[j]});
        return out;
    }

private:
    std::uint64_t limit_ = 0;
    std::vector<std::uint64_t> primes_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> values_;
};

struct HTableOptions {
    double sample_fraction = 0.01;  // share of entries re-derived through L-values
    std::uint64_t seed = 0x5354'4156;
    unsigned workers = 1;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline bool sampled(std::uint64_t seed, std::size_t index, double fraction) noexcept {
    if (fraction >= 1.0) return true;
    if (fraction <= 0.0) return false;
    const double u = static_cast<double>(splitmix64(seed ^ splitmix64(index)) >> 11) * 0x1p-53;
    return u < fraction;
}

}  // namespace detail

/// Entries whose L-value evaluation disagrees with the stored value, as
/// (p, r) pairs; checks every entry selected by the sampling options.
inline std::vector<ClassNumberRecord> lseries_mismatches(const ClassNumberTable& table, const HTableOptions& opt) {
    const auto recs = table.records();
    std::vector<std::int64_t> lvalue(recs.size(), -1);
    parallel_for(recs.size(), opt.workers, [&](std::size_t i) {
        if (!detail::sampled(opt.seed, i, opt.sample_fraction)) return;
        const auto& rec = recs[i];
        const Discriminant D(static_cast<std::int64_t>(rec.r) * rec.r - 4 * static_cast<std::int64_t>(rec.p));
        try {
            lvalue[i] = static_cast<std::int64_t>(kronecker_class_number(D, ClassNumberMode::lseries));
        } catch (const ConsistencyError&) {
            lvalue[i] = -2;
        }
    });
    std::vector<ClassNumberRecord> bad;
    for (std::size_t i = 0; i < recs.size(); ++i)
        if (lvalue[i] != -1 && lvalue[i] != recs[i].H) bad.push_back(recs[i]);
    return bad;
}

/// First record that differs from a fresh reduced-form count.
inline std::optional<ClassNumberRecord> first_forms_mismatch(const std::vector<ClassNumberRecord>& records) {
    for (const auto& rec : records) {
        const Discriminant D(static_cast<std::int64_t>(rec.r) * rec.r - 4 * static_cast<std::int64_t>(rec.p));
        if (reduced_form_count(D) != rec.H) return rec;
    }
    return std::nullopt;
}

/// Builds the table by bulk reduced-form enumeration, then re-derives a
/// random sample of entries from L-values and fails loudly on disagreement.
inline ClassNumberTable h_table(std::uint64_t x, const HTableOptions& opt = {}) {
    if (x < 2) throw DomainError("h_table: limit must be >= 2");
    const auto counts = reduced_form_counts_upto(4 * x);
    std::vector<ClassNumberRecord> records;
    for (const auto& e : numthy::sieve_primes(x)) {
        const auto rmax = max_trace(e.p);
        for (std::int64_t r = 1; r <= rmax; ++r)
            records.push_back({e.p, static_cast<std::uint32_t>(r), counts[4 * e.p - static_cast<std::uint64_t>(r * r)]});
    }
    auto table = ClassNumberTable::from_records(x, records);
    if (const auto bad = lseries_mismatches(table, opt); !bad.empty())
        throw ConsistencyError("class-number mismatch between forms and lseries at (p=" + std::to_string(bad[0].p) +
                               ", r=" + std::to_string(bad[0].r) + ")");
    return table;
}

/// Sum of H(r^2 - 4p) over integer r in [2 sqrt(p) alpha, 2 sqrt(p) beta].
inline std::uint64_t h_p_sum(const ClassNumberTable& table, std::uint64_t p, const IntervalSpec& iv) {
    if (!table.covers(p)) throw RangeError("h_p_sum: table does not cover p=" + std::to_string(p));
    const auto range = traces_in_window(p, iv);
    const auto rmax = max_trace(p);
    std::uint64_t sum = 0;
    for (std::int64_t r = std::max<std::int64_t>(range.lo, 1); r <= std::min(range.hi, rmax); ++r) sum += table.at(p, r);
    return sum;
}

}  // namespace satotate::quadforms
