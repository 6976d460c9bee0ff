#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "satotate/numthy/primes.hpp"
#include "satotate/quadforms/forms.hpp"
#include "satotate/quadforms/htable.hpp"
#include "satotate/quadforms/lseries.hpp"

using namespace satotate;
using namespace satotate::quadforms;

TEST(Discriminant, Validation) {
    EXPECT_NO_THROW(Discriminant(-3));
    EXPECT_NO_THROW(Discriminant(-4));
    EXPECT_THROW(Discriminant(-5), DomainError);
    EXPECT_THROW(Discriminant(-6), DomainError);
    EXPECT_THROW(Discriminant(0), DomainError);
    EXPECT_THROW(Discriminant(5), DomainError);
}

TEST(Decompose, Examples) {
    using T = DecompositionTerm;
    EXPECT_EQ(decompose(Discriminant(-19)), (std::vector<T>{{-19, 1}}));
    EXPECT_EQ(decompose(Discriminant(-16)), (std::vector<T>{{-16, 1}, {-4, 2}}));
    EXPECT_EQ(decompose(Discriminant(-36)), (std::vector<T>{{-36, 1}, {-4, 3}}));
}

TEST(Decompose, CompleteAndAdmissible) {
    for (std::int64_t D = -3; D >= -3000; --D) {
        if (!Discriminant::is_valid(D)) continue;
        const auto terms = decompose(Discriminant(D));
        std::size_t expected = 0;
        for (std::int64_t f = 1; f * f <= -D; ++f)
            if (D % (f * f) == 0 && Discriminant::is_valid(D / (f * f))) ++expected;
        ASSERT_EQ(terms.size(), expected);
        for (const auto& t : terms) {
            ASSERT_EQ(t.d * t.f * t.f, D);
            ASSERT_TRUE(Discriminant::is_valid(t.d));
        }
    }
}

TEST(Forms, ExamplesByEnumeration) {
    EXPECT_EQ(reduced_form_count(Discriminant(-19)), 1u);
    EXPECT_EQ(reduced_form_count(Discriminant(-16)), 2u);
    EXPECT_EQ(reduced_form_count(Discriminant(-4)), 1u);
    EXPECT_EQ(reduced_form_count(Discriminant(-24)), 2u);
    EXPECT_EQ(reduced_form_count(Discriminant(-27)), 2u);
    EXPECT_EQ(enumerate_reduced_forms(Discriminant(-16)), (std::vector<FormTriple>{{1, 0, 4}, {2, 0, 2}}));
    EXPECT_EQ(enumerate_reduced_forms(Discriminant(-27)), (std::vector<FormTriple>{{1, 1, 7}, {3, 3, 3}}));
    EXPECT_EQ(enumerate_reduced_forms(Discriminant(-24)), (std::vector<FormTriple>{{1, 0, 6}, {2, 0, 3}}));
    EXPECT_EQ(primitive_form_count(Discriminant(-16)), 1u);
}

TEST(Forms, EveryEnumeratedFormIsReduced) {
    for (std::int64_t D = -3; D >= -2000; --D) {
        if (!Discriminant::is_valid(D)) continue;
        for (const auto& f : enumerate_reduced_forms(Discriminant(D))) {
            ASSERT_TRUE(f.is_reduced());
            ASSERT_EQ(f.discriminant(), D);
        }
    }
}

TEST(Forms, AllFormsIsSumOfPrimitiveCounts) {
    for (std::int64_t D = -3; D >= -10000; --D) {
        if (!Discriminant::is_valid(D)) continue;
        std::uint64_t sum = 0;
        for (const auto& t : decompose(Discriminant(D))) sum += primitive_form_count(Discriminant(t.d));
        ASSERT_EQ(reduced_form_count(Discriminant(D)), sum) << D;
    }
}

TEST(Forms, BulkEnumerationMatchesSingleCounts) {
    const auto counts = reduced_form_counts_upto(6000);
    for (std::uint64_t n = 1; n <= 6000; ++n) {
        const auto D = -static_cast<std::int64_t>(n);
        const std::uint64_t expected = Discriminant::is_valid(D) ? reduced_form_count(Discriminant(D)) : 0;
        ASSERT_EQ(counts[n], expected) << D;
    }
}

TEST(LSeries, KnownValues) {
    const auto l4 = l1_truncated(Discriminant(-4), 10'000'000);
    EXPECT_NEAR(l4.value, std::numbers::pi / 4, l4.tail_bound);
    EXPECT_NEAR(l4.value, 0.785398, 1e-6);
    const auto l3 = l1_truncated(Discriminant(-3), 1'000'000);
    EXPECT_NEAR(l3.value, std::numbers::pi / (3 * std::sqrt(3.0)), l3.tail_bound);
    EXPECT_NEAR(l3.value, 0.604600, 1e-5);
    const auto l19 = l1_truncated(Discriminant(-19), 1'000'000);
    EXPECT_NEAR(l19.value, std::numbers::pi / std::sqrt(19.0), l19.tail_bound);
    EXPECT_NEAR(l19.value, 0.720738, 1e-5);
    EXPECT_THROW(l1_truncated(Discriminant(-3), 0), DomainError);
}

TEST(LSeries, TruncationStability) {
    for (std::int64_t d : {-3, -4, -7, -19, -163}) {
        for (std::uint64_t U : {1000u, 10000u, 100000u}) {
            const auto a = l1_truncated(Discriminant(d), U);
            const auto b = l1_truncated(Discriminant(d), 2 * U);
            ASSERT_LE(std::fabs(a.value - b.value), a.tail_bound) << d << " " << U;
        }
    }
}

TEST(KroneckerClassNumber, ModesAgreeOnExamples) {
    for (auto [D, H] : std::vector<std::pair<std::int64_t, std::uint64_t>>{
             {-19, 1}, {-16, 2}, {-24, 2}, {-3, 1}, {-4, 1}, {-12, 2}, {-27, 2}}) {
        EXPECT_EQ(kronecker_class_number(Discriminant(D), ClassNumberMode::forms), H) << D;
        EXPECT_EQ(kronecker_class_number(Discriminant(D), ClassNumberMode::lseries), H) << D;
    }
}

TEST(KroneckerClassNumber, LSeriesTailBudget) {
    const auto ev = class_number_lseries(Discriminant(-1003));
    EXPECT_LT(ev.tail_bound, 0.4);
    EXPECT_NEAR(ev.value, std::round(ev.value), 0.4);
}

TEST(KroneckerClassNumber, ModesAgreeForSmallDiscriminants) {
    for (std::int64_t D = -3; D >= -400; --D) {
        if (!Discriminant::is_valid(D)) continue;
        ASSERT_EQ(kronecker_class_number(Discriminant(D), ClassNumberMode::lseries),
                  kronecker_class_number(Discriminant(D), ClassNumberMode::forms))
            << D;
    }
}

TEST(HTable, SmallTables) {
    HTableOptions all;
    all.sample_fraction = 1.0;
    const auto t5 = h_table(5, all);
    EXPECT_EQ(t5.at(5, 1), 1u);
    EXPECT_EQ(t5.at(5, 2), 2u);
    EXPECT_EQ(t5.at(5, 3), 1u);
    EXPECT_EQ(t5.at(5, 4), 1u);
    EXPECT_EQ(t5.at(2, 1), 1u);  // H(-7)
    EXPECT_EQ(t5.at(2, 2), 1u);  // H(-4)
    EXPECT_THROW(t5.at(5, 5), RangeError);
    EXPECT_THROW(t5.at(7, 1), RangeError);

    const auto t7 = h_table(7, all);
    EXPECT_EQ(t7.at(7, 1), 2u);
    EXPECT_EQ(t7.at(7, 2), 2u);
    EXPECT_EQ(t7.at(7, 3), 1u);
    EXPECT_EQ(t7.at(7, 4), 2u);
    EXPECT_EQ(t7.at(7, 5), 1u);
    EXPECT_EQ(t7.at(7, -4), t7.at(7, 4));
}

TEST(HTable, SizeAndOracleAgreement) {
    const auto t = h_table(3000);
    std::size_t expected = 0;
    for (const auto& e : numthy::sieve_primes(3000))
        expected += static_cast<std::size_t>(std::ceil(2 * std::sqrt(static_cast<double>(e.p)))) - 1;
    EXPECT_EQ(t.size(), expected);
    for (const auto& rec : t.records()) {
        if (rec.p > 400) break;
        const std::int64_t D = static_cast<std::int64_t>(rec.r) * rec.r - 4 * static_cast<std::int64_t>(rec.p);
        ASSERT_EQ(rec.H, reduced_form_count(Discriminant(D)));
    }
    EXPECT_FALSE(first_forms_mismatch(t.records()).has_value());
}

TEST(HTable, RejectsIncompleteRecords) {
    auto recs = h_table(11).records();
    recs.pop_back();
    EXPECT_THROW(ClassNumberTable::from_records(11, recs), IntegrityError);
}

TEST(HPSum, Examples) {
    const auto t = h_table(7);
    EXPECT_EQ(h_p_sum(t, 5, IntervalSpec::closed(0.3, 0.9)), 4u);
    EXPECT_EQ(h_p_sum(t, 5, IntervalSpec::closed(0.5, 0.5)), 0u);
    EXPECT_EQ(h_p_sum(t, 7, IntervalSpec::closed(0.1, 0.2)), 2u);
    EXPECT_THROW(h_p_sum(t, 11, IntervalSpec::closed(0.1, 0.2)), RangeError);
}
