#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "satotate/curves/charsum.hpp"
#include "satotate/curves/classes.hpp"
#include "satotate/curves/curve.hpp"
#include "satotate/curves/isomorphism.hpp"
#include "satotate/curves/theta.hpp"
#include "satotate/curves/trace.hpp"
#include "satotate/numthy/modarith.hpp"
#include "satotate/quadforms/forms.hpp"

using namespace satotate;
using namespace satotate::curves;

namespace {

// Independent point count: every (x, y) in F_p^2 plus the point at infinity.
std::int64_t brute_trace(std::int64_t a, std::int64_t b, std::uint64_t p) {
    const auto P = static_cast<std::int64_t>(p);
    std::int64_t points = 1;
    for (std::int64_t x = 0; x < P; ++x)
        for (std::int64_t y = 0; y < P; ++y)
            if (((y * y - x * x * x - a * x - b) % P + P) % P == 0) ++points;
    return P + 1 - points;
}

std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    for (auto p = lo; p <= hi; ++p)
        if (numthy::is_prime(p)) out.push_back(p);
    return out;
}

}  // namespace

TEST(Trace, NaiveExamples) {
    EXPECT_EQ(trace_naive({0, 1}, 5).lambda, 0);
    EXPECT_EQ(trace_naive({2, 3}, 7).lambda, 2);
    EXPECT_EQ(brute_trace(0, 1, 5), 0);
    EXPECT_EQ(brute_trace(2, 3, 7), 2);
    // E(2,3) is singular mod 5; its cubic still has 7 points.
    EXPECT_THROW(trace_naive({2, 3}, 5), ReductionError);
    EXPECT_EQ(count_points_direct({2, 3}, 5), 7u);
    EXPECT_EQ(brute_trace(2, 3, 5), -1);
}

TEST(Trace, NaiveMatchesBruteForce) {
    for (auto p : primes_between(3, 40))
        for (std::int64_t a = 0; a < static_cast<std::int64_t>(p); ++a)
            for (std::int64_t b = 0; b < static_cast<std::int64_t>(p); ++b) {
                const CurveParams E{a, b};
                if (!E.good_reduction(p)) continue;
                ASSERT_EQ(trace_naive(E, p).lambda, brute_trace(a, b, p)) << a << " " << b << " " << p;
            }
}

TEST(Trace, HasseBound) {
    std::mt19937_64 rng(3);
    const auto primes = primes_between(5, 2000);
    std::uniform_int_distribution<std::size_t> pick(0, primes.size() - 1);
    std::uniform_int_distribution<std::int64_t> coef(-100000, 100000);
    int checked = 0;
    while (checked < 10000) {
        const auto p = primes[pick(rng)];
        const CurveParams E{coef(rng), coef(rng)};
        if (!E.good_reduction(p)) continue;
        const auto t = trace_naive(E, p);
        ASSERT_LE(std::abs(t.lambda), hasse_bound(p));
        ASSERT_LE(std::fabs(t.normalized), 1.0);
        ++checked;
    }
}

TEST(Trace, BsgsExamples) {
    EXPECT_EQ(trace_bsgs({2, 3}, 7).lambda, 2);
    EXPECT_EQ(trace_bsgs({1, 1}, 10007).lambda, trace_naive({1, 1}, 10007).lambda);
    EXPECT_EQ(trace_bsgs({0, 1}, 5).lambda, 0);
    EXPECT_THROW(trace_bsgs({2, 3}, 5), ReductionError);
}

TEST(Trace, BsgsAgreesWithNaive) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::uint64_t> pr(5, 100000);
    std::uniform_int_distribution<std::int64_t> coef(-1000000, 1000000);
    int checked = 0;
    while (checked < 300) {
        const auto p = pr(rng);
        if (!numthy::is_prime(p)) continue;
        const CurveParams E{coef(rng), coef(rng)};
        if (!E.good_reduction(p)) continue;
        ASSERT_EQ(trace_bsgs(E, p).lambda, trace_naive(E, p).lambda) << E.a << " " << E.b << " " << p;
        ++checked;
    }
}

TEST(Trace, BsgsFallbackOnSmallPrimes) {
    for (auto p : primes_between(5, 30))
        for (std::int64_t a = 0; a < static_cast<std::int64_t>(p); ++a)
            for (std::int64_t b = 0; b < static_cast<std::int64_t>(p); ++b) {
                const CurveParams E{a, b};
                if (!E.good_reduction(p)) continue;
                ASSERT_EQ(trace_bsgs(E, p).lambda, trace_naive(E, p).lambda);
                if (auto t = trace_bsgs_unchecked(E, p)) {
                    ASSERT_EQ(t->lambda, trace_naive(E, p).lambda);
                }
            }
}

TEST(Angle, Examples) {
    EXPECT_DOUBLE_EQ(angle(TraceResult::make(101, 0)), std::numbers::pi / 2);
    EXPECT_DOUBLE_EQ(angle(TraceResult{4, 4, 1.0}), 0.0);
    EXPECT_NEAR(angle(trace_naive({2, 3}, 7)), std::acos(2.0 / (2.0 * std::sqrt(7.0))), 1e-15);
    EXPECT_NEAR(angle(trace_naive({2, 3}, 7)), 1.1832, 1e-4);
}

TEST(IsoClassSize, Examples) {
    EXPECT_EQ(iso_class_size({0, 5}, 13), 2u);
    EXPECT_EQ(iso_class_size({5, 0}, 13), 3u);
    EXPECT_EQ(iso_class_size({1, 1}, 7), 3u);
    EXPECT_EQ(iso_class_size({0, 1}, 11), 5u);  // a = 0 but p = 2 (mod 3)
    EXPECT_THROW(iso_class_size({0, 0}, 7), ReductionError);
}

TEST(IsoClassSize, MatchesOrbitsUpTo60) {
    for (auto p : primes_between(5, 60))
        for (std::int64_t a = 0; a < static_cast<std::int64_t>(p); ++a)
            for (std::int64_t b = 0; b < static_cast<std::int64_t>(p); ++b) {
                const CurveParams E{a, b};
                if (!E.good_reduction(p)) continue;
                ASSERT_EQ(iso_orbit(E, p).size(), iso_class_size(E, p)) << a << " " << b << " " << p;
            }
}

TEST(IsIsomorphic, Examples) {
    EXPECT_TRUE(is_isomorphic({1, 1}, {1, 4}, 5));
    EXPECT_FALSE(is_isomorphic({1, 1}, {1, 2}, 5));
    EXPECT_TRUE(is_isomorphic({1, 1}, {1, 1}, 7));
    EXPECT_TRUE(isomorphic_by_search({1, 1}, {1, 4}, 5));
    EXPECT_FALSE(isomorphic_by_search({1, 1}, {1, 2}, 5));
}

TEST(IsIsomorphic, CriteriaMatchSearchBothResidueClasses) {
    bool saw1 = false, saw3 = false;
    for (auto p : primes_between(5, 60)) {
        const TraceTable table(p);
        std::vector<CurveParams> off_axis;
        for (std::uint64_t a = 1; a < p; ++a)
            for (std::uint64_t b = 1; b < p; ++b)
                if (!table.is_singular(a, b)) off_axis.push_back({static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)});
        for (const auto& E1 : off_axis)
            for (const auto& E2 : off_axis) {
                if (table(E1.a, E1.b) != table(E2.a, E2.b)) continue;
                ASSERT_EQ(is_isomorphic(E1, E2, p), isomorphic_by_search(E1, E2, p));
            }
        (p % 4 == 1 ? saw1 : saw3) = true;
    }
    EXPECT_TRUE(saw1 && saw3);
}

TEST(IsoClasses, ExamplesAtFive) {
    const auto c1 = enumerate_iso_classes(5, 1);
    ASSERT_EQ(c1.classes.size(), 1u);
    EXPECT_EQ(c1.classes[0].size, 2u);
    EXPECT_FALSE(c1.classes[0].axis);

    const auto c2 = enumerate_iso_classes(5, 2);
    ASSERT_EQ(c2.classes.size(), 2u);
    EXPECT_EQ(c2.axis_count(), 1u);
    EXPECT_EQ(c2.off_axis_count(), 1u);
    for (const auto& c : c2.classes) {
        if (c.axis) {
            EXPECT_EQ(c.u, 1u);
            EXPECT_EQ(c.v, 0u);
            EXPECT_EQ(c.size, 1u);
        } else {
            EXPECT_EQ(c.size, 2u);
        }
    }

    const auto c4 = enumerate_iso_classes(5, 4);
    ASSERT_EQ(c4.classes.size(), 1u);
    EXPECT_EQ(c4.classes[0].u, 2u);
    EXPECT_EQ(c4.classes[0].v, 0u);
    EXPECT_EQ(c4.classes[0].size, 1u);
}

TEST(IsoClasses, RepresentativesArePairwiseNonIsomorphic) {
    for (auto p : primes_between(5, 40)) {
        const TraceTable table(p);
        for (const auto& [r, set] : classify_curves(table))
            for (std::size_t i = 0; i < set.classes.size(); ++i)
                for (std::size_t j = i + 1; j < set.classes.size(); ++j) {
                    const auto& x = set.classes[i];
                    const auto& y = set.classes[j];
                    ASSERT_FALSE(isomorphic_by_search({(std::int64_t)x.u, (std::int64_t)x.v}, {(std::int64_t)y.u, (std::int64_t)y.v}, p));
                }
    }
}

TEST(CountCurves, ExamplesAtFive) {
    EXPECT_EQ(count_curves_with_trace(5, 1), 2u);
    EXPECT_EQ(count_curves_with_trace(5, 2), 3u);
    EXPECT_EQ(count_curves_with_trace(5, 4), 1u);
    auto brute = [](std::int64_t r) {
        std::uint64_t n = 0;
        for (std::int64_t a = 0; a < 5; ++a)
            for (std::int64_t b = 0; b < 5; ++b)
                if (CurveParams{a, b}.good_reduction(5) && brute_trace(a, b, 5) == r) ++n;
        return n;
    };
    EXPECT_EQ(brute(1), 2u);
    EXPECT_EQ(brute(2), 3u);
    EXPECT_EQ(brute(4), 1u);
}

TEST(CountCurves, TwistSymmetryAndCompleteness) {
    for (auto p : primes_between(5, 150)) {
        const TraceTable table(p);
        const auto classes = classify_curves(table);
        std::uint64_t total = 0;
        const auto bound = hasse_bound(p);
        for (std::int64_t r = -bound; r <= bound; ++r) {
            const auto it = classes.find(r);
            const auto n = it == classes.end() ? 0 : it->second.curve_count();
            const auto m = classes.count(-r) ? classes.at(-r).curve_count() : 0;
            ASSERT_EQ(n, m) << p << " " << r;
            ASSERT_EQ(n, table.count_with_trace(r));
            total += n;
        }
        ASSERT_EQ(total, p * p - p) << p;
    }
}

TEST(Deuring, ClassCountEqualsKroneckerClassNumber) {
    for (auto p : primes_between(5, 150)) {
        const auto classes = classify_curves(TraceTable(p));
        for (std::int64_t r = 1; r * r < static_cast<std::int64_t>(4 * p); ++r) {
            const auto D = quadforms::Discriminant(r * r - 4 * static_cast<std::int64_t>(p));
            const auto it = classes.find(r);
            const std::size_t n = it == classes.end() ? 0 : it->second.classes.size();
            ASSERT_EQ(n, quadforms::reduced_form_count(D)) << "p=" << p << " r=" << r;
        }
    }
}

TEST(AxisClasses, AtMostTenUpTo500) {
    for (auto p : primes_between(5, 500)) {
        const auto axis = axis_classes(p);
        ASSERT_LE(axis.size(), 10u) << p;
        if (p <= 60) {
            const auto classes = classify_curves(TraceTable(p));
            std::size_t from_full = 0;
            for (const auto& [r, set] : classes) from_full += set.axis_count();
            ASSERT_EQ(axis.size(), from_full);
        }
    }
}

TEST(CharacterSum, MatchesDirectCount) {
    const auto window = IntervalSpec::closed(0.2, 0.9);
    for (auto p : primes_between(5, 37)) {
        const TraceTable table(p);
        const auto reps = off_axis_classes_in_window(table, window);
        const auto P = static_cast<std::int64_t>(p);
        for (auto [A, B] : std::vector<std::pair<std::int64_t, std::int64_t>>{{1, 1}, {P / 2, P}, {2 * P, P + 3}, {3 * P, 3 * P}}) {
            const double via_characters = character_sum_count(p, reps, A, B);
            const auto direct = count_box_in_classes(p, reps, A, B);
            ASSERT_NEAR(via_characters, static_cast<double>(direct), 1e-6) << "p=" << p << " A=" << A << " B=" << B;
        }
    }
}

TEST(ThetaCurve, Examples) {
    const auto iv = IntervalSpec::closed(0.1, 1.0);
    EXPECT_NEAR(theta_curve({2, 3}, iv, 10), std::log(7.0), 1e-12);
    EXPECT_NEAR(theta_curve({2, 3}, iv, 10), 1.9459, 1e-4);
    EXPECT_EQ(theta_curve({2, 3}, iv, 1), 0.0);
    EXPECT_EQ(theta_curve({0, 0}, iv, 1000), 0.0);
    EXPECT_EQ(theta_curve({-3, 2}, iv, 1000), 0.0);
    // p = 3 is a good prime for E(2,3) with trace 0, below the window.
    EXPECT_EQ(trace_naive({2, 3}, 3).lambda, 0);
}

TEST(ThetaCurve, BackendsAgree) {
    const auto iv = IntervalSpec::closed(0.25, 0.75);
    for (const CurveParams E : {CurveParams{1, 1}, CurveParams{-7, 10}, CurveParams{5, -3}}) {
        const double naive = theta_curve(E, iv, 3000, Backend::naive);
        EXPECT_EQ(naive, theta_curve(E, iv, 3000, Backend::bsgs));
        EXPECT_EQ(naive, theta_curve(E, iv, 3000, Backend::automatic));
    }
}
