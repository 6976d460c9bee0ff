#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "satotate/calibration.hpp"
#include "satotate/curves/classes.hpp"
#include "satotate/curves/isomorphism.hpp"
#include "satotate/curves/trace.hpp"
#include "satotate/family/family.hpp"
#include "satotate/io/cache.hpp"
#include "satotate/io/tables.hpp"
#include "satotate/lconstants/euler.hpp"
#include "satotate/lconstants/partial_sums.hpp"
#include "satotate/progressions/ap.hpp"
#include "satotate/quadforms/forms.hpp"
#include "satotate/quadforms/htable.hpp"
#include "satotate/quadforms/lseries.hpp"

// The acceptance checks, shared by the acceptance binary and `stav verify`.
namespace satotate::verify {

enum class Suite { exact, statistical, all };

struct CheckResult {
    std::string id;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double budget_seconds = 0.0;
};

struct VerifyOptions {
    unsigned workers = 1;
    std::string cache_dir;  // optional; holds htable_<x>.stav
};

inline std::string cache_path(const std::string& dir, std::uint64_t x) {
    return (std::filesystem::path(dir) / ("htable_" + std::to_string(x) + ".stav")).string();
}

/// Checks a class-number cache against a fresh computation. Throws
/// IntegrityError naming the first (p, r) whose stored record is wrong;
/// a bad checksum alone (records intact) is also reported.
inline quadforms::ClassNumberTable verified_class_number_cache(const std::string& path, std::uint64_t x) {
    const auto contents = io::read_cache(path, io::PayloadKind::class_numbers);
    const auto stored = io::decode_class_numbers(contents);
    const auto fresh = quadforms::h_table(x).records();
    const std::size_t n = std::min(stored.size(), fresh.size());
    for (std::size_t i = 0; i < n; ++i)
        if (stored[i].p != fresh[i].p || stored[i].r != fresh[i].r || stored[i].H != fresh[i].H)
            throw IntegrityError("class-number cache " + path + " corrupt at (p=" + std::to_string(fresh[i].p) +
                                 ", r=" + std::to_string(fresh[i].r) + "): stored H=" + std::to_string(stored[i].H) +
                                 " expected H=" + std::to_string(fresh[i].H));
    if (stored.size() != fresh.size())
        throw IntegrityError("class-number cache " + path + " holds " + std::to_string(stored.size()) +
                             " records, expected " + std::to_string(fresh.size()));
    io::require_checksum(contents, path);
    return quadforms::ClassNumberTable::from_records(x, stored);
}

namespace detail {

inline std::string fmt(double v, int digits = 6) {
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

inline std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    for (const auto& e : numthy::sieve_primes(hi))
        if (e.p >= lo) out.push_back(e.p);
    return out;
}

inline std::string csv(const io::Table& t) {
    std::ostringstream s;
    t.write_csv(s);
    return s.str();
}

}  // namespace detail

/// Shared state: expensive artifacts reused between checks.
class Verifier {
public:
    explicit Verifier(VerifyOptions opt) : opt_(std::move(opt)) {}

    // 1
    CheckResult class_number_dual_path() {
        std::uint64_t compared = 0;
        for (const auto p : detail::primes_in(5, 500))
            for (std::int64_t r = 1; r <= quadforms::max_trace(p); ++r) {
                const quadforms::Discriminant D(r * r - 4 * static_cast<std::int64_t>(p));
                const auto forms = quadforms::kronecker_class_number(D, quadforms::ClassNumberMode::forms);
                const auto lser = quadforms::kronecker_class_number(D, quadforms::ClassNumberMode::lseries);
                if (forms != lser)
                    return fail("1", "mismatch at (p=" + std::to_string(p) + ", r=" + std::to_string(r) +
                                         "): forms " + std::to_string(forms) + " lseries " + std::to_string(lser));
                ++compared;
            }
        return pass("1", std::to_string(compared) + " (p, r) pairs, 3 < p <= 500");
    }

    // 2, 3, 8 share one exhaustive classification per prime
    CheckResult deuring() {
        std::uint64_t compared = 0;
        for (const auto p : detail::primes_in(5, 150)) {
            const auto classes = curves::classify_curves(curves::TraceTable(p));
            for (std::int64_t r = 1; r <= quadforms::max_trace(p); ++r) {
                const auto H = quadforms::reduced_form_count(quadforms::Discriminant(r * r - 4 * (std::int64_t)p));
                const auto it = classes.find(r);
                const std::uint64_t n = it == classes.end() ? 0 : it->second.classes.size();
                if (n != H)
                    return fail("2", "(p=" + std::to_string(p) + ", r=" + std::to_string(r) + "): " +
                                         std::to_string(n) + " classes, H=" + std::to_string(H));
                ++compared;
            }
        }
        return pass("2", std::to_string(compared) + " (p, r) pairs, 3 < p <= 150");
    }

    CheckResult count_band() {
        double worst = 0.0;
        std::string where;
        for (const auto p : detail::primes_in(3, 150)) {
            const curves::TraceTable table(p);
            for (std::int64_t r = 1; r <= quadforms::max_trace(p); ++r) {
                const auto H = quadforms::reduced_form_count(quadforms::Discriminant(r * r - 4 * (std::int64_t)p));
                const double count = static_cast<double>(table.count_with_trace(r));
                const double gap = std::fabs(count - static_cast<double>(p - 1) * static_cast<double>(H) / 2.0);
                const double ratio = gap / (4.0 * static_cast<double>(p - 1));
                if (ratio > worst) {
                    worst = ratio;
                    where = "(p=" + std::to_string(p) + ", r=" + std::to_string(r) + ")";
                }
            }
        }
        const std::string detail = "max |count - (p-1)H/2| / 4(p-1) = " + detail::fmt(worst) + " at " + where;
        return worst <= 1.0 ? pass("3", detail) : fail("3", detail);
    }

    CheckResult orbit_sizes() {
        std::uint64_t compared = 0;
        for (const auto p : detail::primes_in(5, 60))
            for (std::int64_t a = 0; a < (std::int64_t)p; ++a)
                for (std::int64_t b = 0; b < (std::int64_t)p; ++b) {
                    const curves::CurveParams E{a, b};
                    if (!E.good_reduction(p)) continue;
                    const auto orbit = curves::iso_orbit(E, p).size();
                    const auto formula = curves::iso_class_size(E, p);
                    if (orbit != formula)
                        return fail("4", "E(" + std::to_string(a) + "," + std::to_string(b) + ") p=" +
                                             std::to_string(p) + ": orbit " + std::to_string(orbit) + " formula " +
                                             std::to_string(formula));
                    ++compared;
                }
        return pass("4", std::to_string(compared) + " curves, p <= 60");
    }

    CheckResult isomorphism_criteria() {
        std::uint64_t pairs = 0;
        bool saw1 = false, saw3 = false;
        for (const auto p : detail::primes_in(5, 60)) {
            const curves::TraceTable table(p);
            std::vector<curves::CurveParams> off_axis;
            for (std::uint64_t a = 1; a < p; ++a)
                for (std::uint64_t b = 1; b < p; ++b)
                    if (!table.is_singular(a, b)) off_axis.push_back({(std::int64_t)a, (std::int64_t)b});
            for (const auto& E1 : off_axis)
                for (const auto& E2 : off_axis) {
                    if (table(E1.a, E1.b) != table(E2.a, E2.b)) continue;
                    if (curves::is_isomorphic(E1, E2, p) != curves::isomorphic_by_search(E1, E2, p))
                        return fail("5", "p=" + std::to_string(p) + " E(" + std::to_string(E1.a) + "," +
                                             std::to_string(E1.b) + ") vs E(" + std::to_string(E2.a) + "," +
                                             std::to_string(E2.b) + ")");
                    ++pairs;
                }
            (p % 4 == 1 ? saw1 : saw3) = true;
        }
        if (!saw1 || !saw3) return fail("5", "both residue classes mod 4 not covered");
        return pass("5", std::to_string(pairs) + " equal-trace off-axis pairs, p <= 60, p = 1 and 3 mod 4");
    }

    CheckResult family_dual_path() {
        const auto box = family::BoxSpec::make(25, 25);
        const auto iv = IntervalSpec::closed(0.2, 0.8);
        const auto by_curve = family::sweep_per_curve(box, iv, 200, options(opt_.workers));
        const auto by_residue = family::sweep_per_residue(box, iv, 200, options(opt_.workers));
        family_csv_[opt_.workers] = dual_path_csv(by_curve, by_residue);
        try {
            family::check_paths_agree(by_curve, by_residue);
        } catch (const ConsistencyError& e) {
            return fail("6", e.what());
        }
        return pass("6", std::to_string(by_curve.primes.size()) + " primes equal counts; weighted sums " +
                             detail::fmt(by_curve.weighted_sum, 17) + " / " + detail::fmt(by_residue.weighted_sum, 17));
    }

    CheckResult backend_equivalence() {
        std::mt19937_64 rng(20240601);
        std::uniform_int_distribution<std::uint64_t> pr(5, 100000);
        std::uniform_int_distribution<std::int64_t> coef(-1000000, 1000000);
        int checked = 0;
        while (checked < 1000) {
            const auto p = pr(rng);
            if (!numthy::is_prime(p)) continue;
            const curves::CurveParams E{coef(rng), coef(rng)};
            if (!E.good_reduction(p)) continue;
            const auto fast = curves::trace_bsgs(E, p).lambda;
            const auto slow = curves::trace_naive(E, p).lambda;
            if (fast != slow)
                return fail("7", "E(" + std::to_string(E.a) + "," + std::to_string(E.b) + ") p=" + std::to_string(p) +
                                     ": bsgs " + std::to_string(fast) + " naive " + std::to_string(slow));
            ++checked;
        }
        return pass("7", "1000 random (curve, p <= 1e5) instances");
    }

    CheckResult twist_symmetry() {
        for (const auto p : detail::primes_in(5, 150)) {
            const curves::TraceTable table(p);
            std::uint64_t total = 0;
            for (std::int64_t r = -quadforms::max_trace(p); r <= quadforms::max_trace(p); ++r) {
                const auto n = table.count_with_trace(r);
                if (n != table.count_with_trace(-r))
                    return fail("8", "count(p=" + std::to_string(p) + ", r=" + std::to_string(r) + ") != count(-r)");
                total += n;
            }
            if (total != p * p - p)
                return fail("8", "p=" + std::to_string(p) + ": " + std::to_string(total) + " nonsingular curves");
        }
        return pass("8", "3 < p <= 150");
    }

    CheckResult constants() {
        const auto primes = numthy::sieve_primes(1000000);
        std::ostringstream d;
        bool ok = true;
        const double ratio = lconstants::k_r(2, primes, 100000).value / lconstants::k_r(1, primes, 100000).value;
        ok &= std::fabs(ratio - 2.0) <= 1e-12;
        d << "K2/K1-2=" << detail::fmt(ratio - 2.0, 3);
        const auto C = lconstants::c_constant(primes, 100000);
        double worst = 0.0;
        for (std::uint64_t r = 1; r <= 50; ++r) {
            const auto K = lconstants::k_r(r, primes, 100000);
            const double f = lconstants::to_double(lconstants::f_mult(r));
            const double slack = K.tail_bound + f * C.tail_bound;
            worst = std::max(worst, std::fabs(K.value - f * C.value) / slack);
        }
        ok &= worst <= 1.0;
        d << "; max |K_r - f(r)C|/tails=" << detail::fmt(worst, 3);
        const double window = lconstants::k_window_sum(0, 1000, primes);
        ok &= std::fabs(window - 1000.0) <= calibration::window_sum_bound;
        d << "; sum K_r (r<=1000) - 1000=" << detail::fmt(window - 1000.0);
        const double K1 = lconstants::k_r(1, primes, 1000000).value;
        const double S = lconstants::partial_sum_S(10000, 100, 1);
        ok &= std::fabs(S - K1) < calibration::partial_sum_tolerance;
        d << "; S(1e4,1e2,1)-K1=" << detail::fmt(S - K1);
        return ok ? pass("9", d.str()) : fail("9", d.str());
    }

    CheckResult progressions() {
        const auto primes = numthy::sieve_primes(100000);
        double worst = 0.0;
        for (std::uint64_t q = 1; q <= 100; ++q)
            for (auto [x, y] : {std::pair{0.0, 100000.0}, std::pair{50000.0, 50000.0}, std::pair{99000.0, 1000.0}}) {
                std::vector<double> parts;
                for (std::uint64_t a = 0; a < q; ++a)
                    if (q == 1 || std::gcd(a, q) == 1)
                        parts.push_back(progressions::theta_ap({x, y, q, (std::int64_t)a}, primes));
                double excluded = 0.0;
                for (const auto& pp : numthy::factorize(q))
                    if ((double)pp.prime > x && (double)pp.prime <= x + y) excluded += std::log((double)pp.prime);
                const double total = numeric::compensated_sum(parts);
                worst = std::max(worst, std::fabs(total - (progressions::theta_ap({x, y, 1, 0}, primes) - excluded)));
            }
        const double bdh = progressions::bdh_moment(10, 10, 2, primes);
        const bool ok = worst <= 1e-9 && std::fabs(bdh - 1.0965) <= 1e-3;
        const std::string d = "max partition gap " + detail::fmt(worst, 3) + "; bdh(10,10,2)=" + detail::fmt(bdh, 10);
        return ok ? pass("10", d) : fail("10", d);
    }

    CheckResult main_term_trend() {
        const auto iv = IntervalSpec::closed(0.2, 0.8);
        const auto& table = class_numbers(20000);
        std::ostringstream d;
        std::vector<double> ratios;
        for (std::uint64_t x : {1000ull, 10000ull, 20000ull}) {
            const double r = family::main_term(x, iv, table) / family::expected_theta(x, iv);
            ratios.push_back(r);
            d << (ratios.size() > 1 ? "; " : "") << "x=" << x << " ratio=" << detail::fmt(r, 8);
        }
        const bool ok = ratios[2] >= 0.85 && ratios[2] <= 1.15 && std::fabs(ratios[2] - 1) < std::fabs(ratios[0] - 1);
        return ok ? pass("11", d.str()) : fail("11", d.str());
    }

    CheckResult family_trend() {
        const std::vector<std::int64_t> sizes = {10, 20, 40};
        std::vector<family::ExperimentReport> reps;
        for (auto A : sizes) reps.push_back(family_report(A, 5000, opt_.workers));
        trend_csv_[opt_.workers] = trend_csv(reps);
        std::ostringstream d;
        bool ok = true;
        std::vector<double> gaps;
        for (const auto& r : reps) {
            gaps.push_back(std::fabs(r.average - r.main_term));
            d << "A=B=" << r.box.A << " |avg-main|=" << detail::fmt(gaps.back()) << " m2/(xF)^2="
              << detail::fmt(r.second_moment / (r.xF * r.xF)) << "; ";
        }
        for (std::size_t i = 1; i < gaps.size(); ++i) ok &= gaps[i] <= 1.1 * gaps[i - 1];
        const auto sm = [](const family::ExperimentReport& r) { return r.second_moment / (r.xF * r.xF); };
        ok &= sm(reps[2]) < sm(reps[0]);
        auto detail = d.str();
        detail.resize(detail.size() - 2);
        return ok ? pass("12", detail) : fail("12", detail);
    }

    CheckResult determinism() {
        const unsigned base = opt_.workers;
        const unsigned other = base == 8 ? 1 : 8;
        if (!family_csv_.count(base)) (void)family_dual_path();
        if (!trend_csv_.count(base)) (void)family_trend();
        const auto saved = opt_.workers;
        opt_.workers = other;
        (void)family_dual_path();
        (void)family_trend();
        opt_.workers = saved;
        const bool same6 = family_csv_.at(base) == family_csv_.at(other);
        const bool same12 = trend_csv_.at(base) == trend_csv_.at(other);
        const std::string d = "workers " + std::to_string(base) + " vs " + std::to_string(other) + ": criterion-6 CSV " +
                              (same6 ? "identical" : "differs") + ", criterion-12 CSV " +
                              (same12 ? "identical" : "differs") + " (" +
                              std::to_string(trend_csv_.at(base).size()) + " bytes)";
        return same6 && same12 ? pass("13", d) : fail("13", d);
    }

    /// Exceptional fraction at A=B=40, rel_tol 0.2, must fall across x = 1000, 2500, 5000.
    CheckResult exceptional_trend() {
        std::ostringstream d;
        std::vector<double> fractions;
        for (std::uint64_t x : {1000ull, 2500ull, 5000ull}) {
            const auto r = family_report(40, x, opt_.workers);
            fractions.push_back(static_cast<double>(r.exceptional_count) / static_cast<double>(r.box.cardinality()));
            d << (fractions.size() > 1 ? "; " : "") << "x=" << x << " fraction=" << detail::fmt(fractions.back());
        }
        const bool ok = fractions[1] < fractions[0] && fractions[2] < fractions[1];
        return ok ? pass("E", d.str()) : fail("E", d.str());
    }

    /// main_term / xF for the statistical report table.
    std::vector<std::pair<std::uint64_t, double>> main_term_ratios() {
        const auto iv = IntervalSpec::closed(0.2, 0.8);
        std::vector<std::pair<std::uint64_t, double>> out;
        for (std::uint64_t x : {1000ull, 10000ull, 20000ull})
            out.emplace_back(x, family::main_term(x, iv, class_numbers(20000)) / family::expected_theta(x, iv));
        return out;
    }

    struct Entry {
        std::string id;
        std::string title;
        Suite suite;
        double budget_seconds;
        std::function<CheckResult(Verifier&)> run;
    };

    static const std::vector<Entry>& entries() {
        static const std::vector<Entry> list = {
            {"1", "class numbers: lseries == forms, p <= 500", Suite::exact, 120, &Verifier::class_number_dual_path},
            {"2", "Deuring: class count == H(r^2-4p), p <= 150", Suite::exact, 120, &Verifier::deuring},
            {"3", "curve counts within 4(p-1) of (p-1)H/2, p <= 150", Suite::exact, 60, &Verifier::count_band},
            {"4", "orbit sizes == closed formula, p <= 60", Suite::exact, 60, &Verifier::orbit_sizes},
            {"5", "isomorphism criteria == m-search, p <= 60", Suite::exact, 60, &Verifier::isomorphism_criteria},
            {"6", "family average: per_curve == per_residue, A=B=25, x=200", Suite::exact, 60,
             &Verifier::family_dual_path},
            {"7", "trace backends agree on 1000 random instances", Suite::exact, 60, &Verifier::backend_equivalence},
            {"8", "twist symmetry and completeness, p <= 150", Suite::exact, 60, &Verifier::twist_symmetry},
            {"9", "constants K_r, f(r)C, window sum, partial sum", Suite::statistical, 60, &Verifier::constants},
            {"10", "progression partition and bdh moment", Suite::exact, 60, &Verifier::progressions},
            {"11", "main term / xF trend, iv=[0.2,0.8]", Suite::statistical, 300, &Verifier::main_term_trend},
            {"12", "family average and second moment trend, x=5000", Suite::statistical, 600,
             &Verifier::family_trend},
            {"13", "CSV identical for workers 1 and 8", Suite::statistical, 600, &Verifier::determinism},
            {"E", "exceptional fraction falls with x, A=B=40", Suite::statistical, 300,
             &Verifier::exceptional_trend},
        };
        return list;
    }

    static bool selected(Suite requested, Suite s) { return requested == Suite::all || requested == s; }

    /// Runs one entry with timing; library errors become failures.
    CheckResult run(const Entry& e) {
        const auto t0 = std::chrono::steady_clock::now();
        CheckResult r;
        try {
            r = e.run(*this);
        } catch (const Error& err) {
            if (err.is_consistency_failure()) throw;
            r = fail(e.id, std::string(to_string(err.kind())) + ": " + err.what());
        }
        r.title = e.title;
        r.budget_seconds = e.budget_seconds;
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
    }

private:
    static CheckResult pass(std::string id, std::string detail) { return {std::move(id), {}, true, std::move(detail)}; }
    static CheckResult fail(std::string id, std::string detail) { return {std::move(id), {}, false, std::move(detail)}; }

    static family::SweepOptions options(unsigned workers) {
        return {curves::Backend::bsgs, curves::default_bsgs_threshold, workers};
    }

    const quadforms::ClassNumberTable& class_numbers(std::uint64_t x) {
        if (!htable_ || htable_->limit() != x) {
            const auto path = opt_.cache_dir.empty() ? std::string() : cache_path(opt_.cache_dir, x);
            if (!path.empty() && std::filesystem::exists(path)) {
                htable_ = verified_class_number_cache(path, x);
            } else {
                htable_ = quadforms::h_table(x);
                if (!opt_.cache_dir.empty()) {
                    std::filesystem::create_directories(opt_.cache_dir);
                    io::write_class_numbers(path, *htable_);
                }
            }
        }
        return *htable_;
    }

    const family::ExperimentReport& family_report(std::int64_t A, std::uint64_t x, unsigned workers) {
        const auto key = std::tuple{A, x, workers};
        if (const auto it = reports_.find(key); it != reports_.end()) return it->second;
        const auto box = family::BoxSpec::make(A, A);
        const auto iv = IntervalSpec::closed(0.2, 0.8);
        const auto sweep = family::sweep_per_curve(box, iv, x, options(workers));
        family::ExperimentReport rep;
        rep.x = x;
        rep.box = box;
        rep.iv = iv;
        rep.rel_tol = 0.2;
        rep.average = sweep.average();
        rep.main_term = family::main_term(x, iv, class_numbers(20000));
        rep.xF = family::expected_theta(x, iv);
        rep.second_moment = family::second_moment(sweep.theta, box, rep.xF).direct;
        rep.exceptional_count = family::exceptional_count(sweep.theta, rep.xF, rep.rel_tol);
        rep.primes = sweep.primes;
        rep.counts = sweep.counts;
        return reports_[key] = std::move(rep);
    }

    static std::string dual_path_csv(const family::FamilySweep& a, const family::FamilySweep& b) {
        io::Table t({"p", "per_curve", "per_residue"});
        for (std::size_t i = 0; i < a.primes.size(); ++i) t.add_row({a.primes[i], a.counts[i], b.counts[i]});
        io::Table w({"path", "weighted_sum"});
        w.add_row({std::string("per_curve"), a.weighted_sum});
        w.add_row({std::string("per_residue"), b.weighted_sum});
        return detail::csv(t) + detail::csv(w);
    }

    static std::string trend_csv(const std::vector<family::ExperimentReport>& reps) {
        auto t = io::family_table();
        std::string per_prime;
        for (const auto& r : reps) {
            io::add_report(t, r);
            per_prime += detail::csv(io::prime_count_table(r.primes, r.counts));
        }
        return detail::csv(t) + per_prime;
    }

    VerifyOptions opt_;
    std::optional<quadforms::ClassNumberTable> htable_;
    std::map<unsigned, std::string> family_csv_;
    std::map<unsigned, std::string> trend_csv_;
    std::map<std::tuple<std::int64_t, std::uint64_t, unsigned>, family::ExperimentReport> reports_;
};

/// Runs the selected suite, calling `report` after each check.
inline bool run_suite(Verifier& v, Suite suite, const std::function<void(const CheckResult&)>& report) {
    bool all = true;
    for (const auto& e : Verifier::entries()) {
        if (!Verifier::selected(suite, e.suite)) continue;
        const auto r = v.run(e);
        all &= r.passed;
        report(r);
    }
    return all;
}

inline std::string format_result(const CheckResult& r) {
    std::ostringstream s;
    s << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.title << " :: " << r.detail << " ("
      << detail::fmt(r.seconds, 3) << " s";
    if (r.seconds > r.budget_seconds) s << ", over " << r.budget_seconds << " s budget";
    s << ")";
    return s.str();
}

}  // namespace satotate::verify
