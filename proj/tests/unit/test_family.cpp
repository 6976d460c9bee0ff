#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "satotate/family/family.hpp"
#include "satotate/family/measure.hpp"

using namespace satotate;
using namespace satotate::family;

namespace {

double f_quadrature(double alpha, double beta) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    return 2.0 / std::numbers::pi * integrator.integrate([](double t) { return std::sqrt(1.0 - t * t); }, alpha, beta);
}

}  // namespace

TEST(FMeasure, Examples) {
    EXPECT_NEAR(f_measure(-1, 1), 1.0, 1e-15);
    EXPECT_NEAR(f_measure(0, 1), 0.5, 1e-15);
    EXPECT_NEAR(f_measure(0.6, 0.8), (std::asin(0.8) - std::asin(0.6)) / std::numbers::pi, 1e-15);
    EXPECT_NEAR(f_measure(0.6, 0.8), f_quadrature(0.6, 0.8), 1e-12);
    EXPECT_NEAR(f_measure(0.6, 0.8), 0.0903345, 1e-7);
    EXPECT_EQ(f_measure(0.3, 0.3), 0.0);
    EXPECT_THROW(f_measure(0.5, 0.4), DomainError);
    EXPECT_THROW(f_measure(-1.1, 0.4), DomainError);
    EXPECT_THROW(f_measure(0.1, 1.0001), DomainError);
}

TEST(FMeasure, MatchesQuadrature) {
    for (double a = -1.0; a <= 1.0; a += 0.125)
        for (double b = a; b <= 1.0; b += 0.1875) EXPECT_NEAR(f_measure(a, b), f_quadrature(a, b), 1e-12) << a << " " << b;
}

TEST(FMeasure, Additive) {
    for (double a = -1.0; a < 1.0; a += 0.13)
        for (double b = a; b < 1.0; b += 0.11)
            for (double c = b; c <= 1.0; c += 0.17)
                ASSERT_NEAR(f_measure(a, c), f_measure(a, b) + f_measure(b, c), 1e-12);
}

TEST(MainTerm, Examples) {
    const auto iv = IntervalSpec::closed(0.3, 0.9);
    const double expected = std::log(2.0) * 2 / 4 + std::log(3.0) * 2 / 6 + std::log(5.0) * 4 / 10 + std::log(7.0) * 5 / 14;
    EXPECT_NEAR(main_term(10, iv), expected, 1e-14);
    EXPECT_NEAR(main_term(10, iv), 2.0515, 1e-4);
    EXPECT_EQ(main_term(4, IntervalSpec::closed(0.9, 1.0)), 0.0);
    EXPECT_EQ(main_term(1, iv), 0.0);
}

TEST(MainTerm, UncoveredTableThrows) {
    const auto table = quadforms::h_table(100);
    EXPECT_THROW(main_term(200, IntervalSpec::closed(0.2, 0.8), table), RangeError);
}

TEST(MainTerm, HalfOpenAdditivity) {
    const auto table = quadforms::h_table(3000);
    for (auto [a, b, d] : {std::tuple{0.1, 0.45, 0.9}, std::tuple{0.2, 0.5, 1.0}, std::tuple{0.05, 0.7, 0.71}}) {
        const double whole = main_term(3000, IntervalSpec::closed(a, d), table);
        const double left = main_term(3000, IntervalSpec::closed(a, b), table);
        const double right = main_term(3000, IntervalSpec::half_open(b, d), table);
        EXPECT_NEAR(whole, left + right, 1e-9 * whole);
    }
}

TEST(MainTerm, TrendTowardXF) {
    const auto iv = IntervalSpec::closed(0.2, 0.8);
    const auto table = quadforms::h_table(5000);
    const double r1 = main_term(1000, iv, table) / expected_theta(1000, iv);
    const double r2 = main_term(5000, iv, table) / expected_theta(5000, iv);
    EXPECT_LT(std::fabs(r2 - 1.0), std::fabs(r1 - 1.0));
}

TEST(FamilyAverage, EmptyPrimeRange) {
    const auto box = BoxSpec::make(3, 4);
    const auto iv = IntervalSpec::closed(0.2, 0.8);
    EXPECT_EQ(family_average(box, iv, 1, AveragePath::per_curve), 0.0);
    EXPECT_EQ(family_average(box, iv, 1, AveragePath::per_residue), 0.0);
}

TEST(FamilyAverage, DegenerateWindowIsEmpty) {
    const auto iv = IntervalSpec::closed(0.3, 0.3);
    EXPECT_EQ(family_average(BoxSpec::make(1, 1), iv, 20, AveragePath::per_curve), 0.0);
    EXPECT_EQ(family_average(BoxSpec::make(1, 1), iv, 20, AveragePath::per_residue), 0.0);
}

TEST(FamilyAverage, PathsAgreeAt25And200) {
    const auto box = BoxSpec::make(25, 25);
    const auto iv = IntervalSpec::closed(0.2, 0.8);
    const auto by_curve = sweep_per_curve(box, iv, 200);
    const auto by_residue = sweep_per_residue(box, iv, 200);
    EXPECT_EQ(by_curve.counts, by_residue.counts);
    EXPECT_NEAR(by_curve.weighted_sum, by_residue.weighted_sum, 1e-9 * by_curve.weighted_sum);
    EXPECT_NO_THROW(check_paths_agree(by_curve, by_residue));
    EXPECT_GT(by_curve.average(), 0.0);
}

TEST(FamilyAverage, PathsAgreeOnAssortedBoxes) {
    for (auto [A, B, x] : {std::tuple{1, 1, 50}, std::tuple{3, 17, 120}, std::tuple{40, 2, 300}}) {
        const auto box = BoxSpec::make(A, B);
        for (const auto& iv : {IntervalSpec::closed(0.1, 1.0), IntervalSpec::closed(0.5, 0.6)})
            EXPECT_NO_THROW(family_sweep_checked(box, iv, x));
    }
}

TEST(FamilyAverage, ThetaMatchesTheta_curve) {
    const auto box = BoxSpec::make(4, 3);
    const auto iv = IntervalSpec::closed(0.25, 0.9);
    const auto s = sweep_per_curve(box, iv, 400);
    for (std::uint64_t i = 0; i < box.cardinality(); ++i)
        ASSERT_NEAR(s.theta[i], curves::theta_curve(box.curve(i), iv, 400), 1e-12);
}

TEST(FamilyAverage, DisagreementIsReported) {
    const auto box = BoxSpec::make(5, 5);
    const auto iv = IntervalSpec::closed(0.2, 0.8);
    const auto a = sweep_per_curve(box, iv, 100);
    auto b = a;
    b.counts[5] += 1;
    try {
        check_paths_agree(a, b);
        FAIL();
    } catch (const ConsistencyError& e) {
        EXPECT_NE(std::string(e.what()).find("p=" + std::to_string(a.primes[5])), std::string::npos);
    }
}

TEST(FamilyAverage, PerResidueLimited) {
    EXPECT_THROW(sweep_per_residue(BoxSpec::make(1, 1), IntervalSpec::closed(0.2, 0.8), 600), DomainError);
}

TEST(FamilyAverage, WorkerCountInvariant) {
    const auto box = BoxSpec::make(12, 9);
    const auto iv = IntervalSpec::closed(0.2, 0.8);
    const auto one = sweep_per_curve(box, iv, 700, {curves::Backend::bsgs, 0, 1});
    const auto many = sweep_per_curve(box, iv, 700, {curves::Backend::bsgs, 0, 8});
    EXPECT_EQ(one.counts, many.counts);
    EXPECT_EQ(one.theta, many.theta);
    EXPECT_EQ(one.weighted_sum, many.weighted_sum);
}

TEST(FamilyAverage, BackendsAgree) {
    const auto box = BoxSpec::make(6, 6);
    const auto iv = IntervalSpec::closed(0.2, 0.8);
    const auto naive = sweep_per_curve(box, iv, 1500, {curves::Backend::naive});
    const auto bsgs = sweep_per_curve(box, iv, 1500, {curves::Backend::bsgs});
    EXPECT_EQ(naive.counts, bsgs.counts);
    EXPECT_EQ(naive.theta, bsgs.theta);
}

TEST(SecondMoment, ZeroThetaGivesScaledF2) {
    const auto box = BoxSpec::make(3, 5);
    const auto iv = IntervalSpec::closed(0.2, 0.8);
    const auto s = sweep_per_curve(box, iv, 1);
    const double F = f_measure(0.2, 0.8);
    const auto m = second_moment(s.theta, box, expected_theta(1, iv));
    const double N = static_cast<double>(box.cardinality());
    EXPECT_NEAR(m.direct, N / box.normalization() * F * F, 1e-15);
}

TEST(SecondMoment, DecompositionAgreesAndBoundsBias) {
    const auto box = BoxSpec::make(10, 10);
    const auto iv = IntervalSpec::closed(0.2, 0.8);
    const auto s = sweep_per_curve(box, iv, 100);
    const double xF = expected_theta(100, iv);
    const auto m = second_moment(s.theta, box, xF);
    EXPECT_NEAR(m.direct, m.decomposed, 1e-9 * m.direct);
    const double N = static_cast<double>(box.cardinality());
    EXPECT_GE(m.direct, N / box.normalization() * (m.mean - xF) * (m.mean - xF));
    EXPECT_NEAR(m.mean * N / box.normalization(), s.average(), 1e-12);
}

TEST(SecondMoment, WrongSizeRejected) {
    EXPECT_THROW(second_moment({1.0, 2.0}, BoxSpec::make(1, 1), 1.0), DomainError);
}

TEST(Exceptions, Examples) {
    const auto box = BoxSpec::make(5, 5);
    const auto iv = IntervalSpec::closed(0.2, 0.8);
    const auto s = sweep_per_curve(box, iv, 300);
    const double xF = expected_theta(300, iv);
    EXPECT_EQ(exceptional_count(s.theta, xF, std::numeric_limits<double>::infinity()), 0u);
    const auto ties = static_cast<std::uint64_t>(std::count(s.theta.begin(), s.theta.end(), xF));
    EXPECT_EQ(exceptional_count(s.theta, xF, std::numeric_limits<double>::denorm_min()), box.cardinality() - ties);
    EXPECT_THROW(exceptional_count(s.theta, xF, 0.0), DomainError);
    EXPECT_LE(exceptional_count(s.theta, xF, 0.5), exceptional_count(s.theta, xF, 0.2));
}

TEST(Experiment, ReportFieldsConsistent) {
    const auto rep = run_experiment(BoxSpec::make(4, 4), IntervalSpec::closed(0.2, 0.8), 500, 0.2);
    EXPECT_GE(rep.average, 0.0);
    EXPECT_GE(rep.second_moment, 0.0);
    EXPECT_NEAR(rep.xF, 500 * f_measure(0.2, 0.8), 1e-12);
    EXPECT_NEAR(rep.main_term, main_term(500, IntervalSpec::closed(0.2, 0.8)), 1e-12);
    EXPECT_EQ(rep.primes.size(), rep.counts.size());
}
