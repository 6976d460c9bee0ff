#pragma once

#include <cstdint>
#include <vector>

#include "satotate/family/family.hpp"
#include "satotate/io/cache.hpp"
#include "satotate/io/report.hpp"
#include "satotate/lconstants/euler.hpp"
#include "satotate/quadforms/htable.hpp"

// Builders for the exported CSV/JSON schemas.
namespace satotate::io {

inline Table class_number_table(const quadforms::ClassNumberTable& table) {
    Table t({"p", "r", "D", "H"});
    for (const auto& rec : table.records()) {
        const auto r = static_cast<std::int64_t>(rec.r);
        t.add_row({rec.p, r, r * r - 4 * static_cast<std::int64_t>(rec.p), std::uint64_t{rec.H}});
    }
    return t;
}

inline Table trace_table(const std::vector<TraceRecord>& records) {
    Table t({"p", "a", "b", "lambda"});
    for (const auto& rec : records) t.add_row({rec.p, rec.a, rec.b, rec.lambda});
    return t;
}

inline Table constants_table() { return Table({"r", "cutoff", "K_r", "tail_bound"}); }

inline void add_constant(Table& t, std::uint64_t r, const lconstants::TruncatedProduct& k) {
    t.add_row({r, k.cutoff, k.value, k.tail_bound});
}

inline Table progression_table() { return Table({"q", "a", "theta", "E"}); }
inline Table bdh_table() { return Table({"Q", "y", "moment"}); }

inline Table family_table() {
    return Table({"x", "alpha", "beta", "A", "B", "average", "main_term", "xF", "second_moment", "exceptional_count",
                  "rel_tol"});
}

inline void add_report(Table& t, const family::ExperimentReport& r) {
    t.add_row({r.x, r.iv.alpha, r.iv.beta, r.box.A, r.box.B, r.average, r.main_term, r.xF, r.second_moment,
               r.exceptional_count, r.rel_tol});
}

/// Per-prime in-window curve counts of one run.
inline Table prime_count_table(const std::vector<std::uint64_t>& primes, const std::vector<std::uint64_t>& counts) {
    Table t({"p", "count"});
    for (std::size_t i = 0; i < primes.size(); ++i) t.add_row({primes[i], counts[i]});
    return t;
}

}  // namespace satotate::io
