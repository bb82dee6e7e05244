#include <gtest/gtest.h>

#include <random>

#include "tgsurf/census.hpp"
#include "tgsurf/verify.hpp"

using namespace tgsurf;

namespace {

std::uint64_t count_by_formula(std::int64_t d, std::int64_t a, std::int64_t r, const Rational& X, std::int64_t n_max)
{
    std::uint64_t n_found = 0;
    for (std::int64_t n = 1; n <= n_max; ++n)
        if (mod_floor(n - r, static_cast<std::uint64_t>(a)) == 0 && F_value(d, n) < X) ++n_found;
    return n_found;
}

/// All (m, c) with D <= D_max and area < X, without any stopping bound.
std::vector<std::pair<std::int64_t, std::int64_t>> naive_pairs(std::int64_t d, const Rational& X, std::int64_t D_max)
{
    const ThresholdComparator cmp(X);
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (const SurfaceIndex& s : surfaces_up_to_D(d, D_max))
        if (s.r == 1 && cmp.less(area_closed_form(s).q)) out.emplace_back(s.m, s.c);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST(FValue, Examples)
{
    EXPECT_EQ(F_value(3, 1), Rational(1));
    EXPECT_EQ(F_value(3, 2), Rational(1));
    EXPECT_EQ(F_value(3, 6), Rational(3));
    EXPECT_EQ(F_value(7, 2), Rational(3));
    EXPECT_THROW(F_value(3, 0), domain_error);
    for (std::int64_t n = 1; n < 500; ++n) EXPECT_TRUE(F_value(3, n).is_integer());
}

TEST(CountF, Examples)
{
    EXPECT_EQ(count_F_in_progression(3, 1, 0, Rational(3)), 3U);
    EXPECT_EQ(count_F_in_progression(3, 1, 0, Rational(1)), 0U);
    EXPECT_EQ(count_F_in_progression(3, 3, 0, Rational(10)), 5U);
    EXPECT_EQ(count_F_in_progression(3, 3, 0, Rational(10)), count_by_formula(3, 3, 0, Rational(10), 200));
    EXPECT_EQ(count_F_in_progression(3, 1, 0, Rational(10000)), 15559U);
    EXPECT_THROW(count_F_in_progression(3, 5, 0, Rational(10)), domain_error);
    EXPECT_THROW(count_F_in_progression(3, 1, 0, Rational(0)), domain_error);
}

TEST(CountF, MatchesDirectEvaluation)
{
    std::mt19937_64 rng(99);
    const std::vector<std::pair<std::int64_t, std::int64_t>> moduli{{3, 1}, {3, 3}, {3, 9}, {15, 5}, {15, 15}, {7, 7}, {23, 1}};
    for (const auto& [d, a] : moduli) {
        for (int trial = 0; trial < 4; ++trial) {
            const std::int64_t r = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(a));
            const Rational X(static_cast<std::int64_t>(rng() % 400 + 1), static_cast<std::int64_t>(rng() % 3 + 1));
            // F(n) >= phi(n) >= n/6 here, so n <= 6X + 6 covers everything below X
            EXPECT_EQ(count_F_in_progression(d, a, r, X), count_by_formula(d, a, r, X, 6 * 400 + 6)) << d << " " << a << " " << r << " " << X;
        }
    }
}

TEST(PhiEnvelope, MonotoneLowerBound)
{
    Rational prev(0);
    for (std::uint64_t n = 1; n < 40000; ++n) {
        const Rational e = phi_envelope(n);
        EXPECT_LE(e, Rational(static_cast<std::int64_t>(totient(n)))) << n;
        EXPECT_GE(e, prev) << n;
        prev = e;
    }
}

TEST(Enumerate, Examples)
{
    const CensusResult small = enumerate_surfaces(3, Rational::from_decimal("1.1"));
    ASSERT_EQ(small.records.size(), 2U);
    EXPECT_EQ(small.records[0], (SurfaceRecord{1, 0, 1, 3, 3, Rational(1, 3)}));
    EXPECT_EQ(small.records[1], (SurfaceRecord{2, 1, 1, 3, 3, Rational(1, 3)}));
    EXPECT_TRUE(enumerate_surfaces(3, Rational::from_decimal("0.5")).records.empty());

    const CensusResult five = enumerate_surfaces(3, Rational::from_decimal("2.2"));
    ASSERT_EQ(five.records.size(), 5U);
    const std::vector<std::pair<std::int64_t, std::int64_t>> expected{{1, 0}, {2, 1}, {0, -2}, {1, -1}, {2, 0}};
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(five.records[i].m, expected[i].first);
        EXPECT_EQ(five.records[i].c, expected[i].second);
        EXPECT_EQ(five.records[i].q, i < 2 ? Rational(1, 3) : Rational(2, 3));
    }
    EXPECT_THROW(enumerate_surfaces(39, Rational(10)), domain_error);
    EXPECT_THROW(enumerate_surfaces(3, Rational(0)), domain_error);
}

TEST(Xi, SpotValues)
{
    EXPECT_EQ(xi(3, "1.1"), 2U);
    EXPECT_EQ(xi(3, "0.5"), 0U);
    EXPECT_EQ(xi(3, "2.2"), 5U);
}

TEST(Enumerate, MatchesUnboundedScan)
{
    // with area >= D/(3 d0^2) * phi-ish factors, D <= 3000 covers X = 20 comfortably for these d
    for (std::int64_t d : {3, 7, 11}) {
        const Rational X(20);
        CensusOptions opt;
        opt.materialize_r = false;
        std::vector<std::pair<std::int64_t, std::int64_t>> got;
        for (const auto& s : enumerate_surfaces(d, X, opt).records) got.emplace_back(s.m, s.c);
        std::sort(got.begin(), got.end());
        EXPECT_EQ(got, naive_pairs(d, X, 3000)) << d;
    }
}

TEST(Enumerate, CompleteUnderDoubledBound)
{
    for (std::int64_t d : reference_ds())
        for (const char* x : {"1", "30", "300", "1000"}) {
            const Rational X = Rational::from_decimal(x);
            CensusOptions loose;
            loose.bound_slack = 2;
            EXPECT_EQ(enumerate_surfaces(d, X).records, enumerate_surfaces(d, X, loose).records) << d << " " << x;
        }
}

TEST(Enumerate, SortedWithRMultiplicity)
{
    const CensusResult res = enumerate_surfaces(15, Rational(200));
    EXPECT_EQ(res.r_multiplicity, 2);
    EXPECT_EQ(res.records.size(), res.xi());
    EXPECT_EQ(res.records.size(), 2 * res.pair_count);
    for (std::size_t i = 1; i < res.records.size(); ++i) {
        const auto& a = res.records[i - 1];
        const auto& b = res.records[i];
        EXPECT_TRUE(a.q < b.q || (a.q == b.q && std::tie(a.m, a.c, a.r) < std::tie(b.m, b.c, b.r)));
    }
    for (const auto& s : res.records) {
        EXPECT_TRUE(s.r == 1 || s.r == 3);
        EXPECT_EQ(s.q, area_closed_form({15, s.m, s.c, s.r}).q);
        EXPECT_LT(s.q.to_double() * 3.141592653589793, 200.0 + 1e-9);
    }
}

TEST(Enumerate, ThreadsDoNotChangeTheResult)
{
    CensusOptions one, three;
    three.jobs = 3;
    for (std::int64_t d : {3, 15, 23})
        EXPECT_EQ(enumerate_surfaces(d, Rational(500), one).records, enumerate_surfaces(d, Rational(500), three).records);
}

TEST(Xi, Monotone)
{
    for (std::int64_t d : {3, 7, 15}) {
        std::uint64_t prev = 0;
        for (int x = 1; x <= 400; x += 13) {
            const std::uint64_t v = xi(d, Rational(x));
            EXPECT_GE(v, prev);
            prev = v;
        }
    }
}

TEST(FitReport, RowsAndEdgeCases)
{
    const auto rows = fit_report(3, {Rational::from_decimal("0.5"), Rational(100), Rational(1000)});
    ASSERT_EQ(rows.size(), 3U);
    EXPECT_EQ(rows[0].xi, 0U);
    EXPECT_EQ(rows[0].ratio, 0.0L);
    EXPECT_EQ(rows[2].xi, 1742U);
    EXPECT_EQ(rows[1].xi, xi(3, Rational(100)));
    EXPECT_NEAR(static_cast<double>(rows[2].deviation), 0.0038665, 1e-6);
    EXPECT_THROW(fit_report(3, {Rational(10), Rational(5)}), domain_error);
    const auto again = fit_report(3, {Rational::from_decimal("0.5"), Rational(100), Rational(1000)});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].xi, again[i].xi);
        EXPECT_EQ(rows[i].deviation, again[i].deviation);
    }
}
