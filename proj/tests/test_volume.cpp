#include <gtest/gtest.h>

#include <set>

#include "tgsurf/verify.hpp"
#include "tgsurf/volume.hpp"

using namespace tgsurf;

namespace {

const char* kPi50 = "3.14159265358979323846264338327950288419716939937510";

} // namespace

TEST(PiInterval, ContainsPi)
{
    const Rational pi50 = Rational::from_decimal(kPi50);
    const Rational ulp(BigInt(1), BigInt("100000000000000000000000000000000000000000000000000"));
    for (unsigned digits : {10U, 30U, 45U}) {
        const PiInterval pi = pi_interval(digits);
        EXPECT_LT(pi.lo, pi.hi);
        EXPECT_LT(pi.lo, pi50 + ulp);
        EXPECT_GT(pi.hi, pi50 - ulp);
    }
    const PiInterval tight = pi_interval(45);
    EXPECT_LT(tight.hi - tight.lo, Rational::from_decimal("1e-44"));
}

TEST(Threshold, Examples)
{
    EXPECT_EQ(compare_to_threshold({Rational(1, 3)}, "1.1"), std::strong_ordering::less);
    EXPECT_EQ(compare_to_threshold({Rational(4, 3)}, "4.0"), std::strong_ordering::greater);
    EXPECT_EQ(compare_to_threshold({Rational(2, 3)}, "2.0943951"), std::strong_ordering::greater);
    EXPECT_THROW(ThresholdComparator(Rational(0)), domain_error);
    EXPECT_THROW(ThresholdComparator::from_decimal("-1"), domain_error);
}

TEST(Threshold, RefinesNearTies)
{
    // 2 pi/3 to 70 digits, nudged by 1e-68 either way
    const std::string two_pi_third = "2.0943951023931954923084289221863352561314462662500705473166297282052";
    const Rational x = Rational::from_decimal(two_pi_third);
    const Rational eps = Rational::from_decimal("1e-66");
    EXPECT_EQ(ThresholdComparator(x + eps).compare(Rational(2, 3)), std::strong_ordering::less);
    EXPECT_EQ(ThresholdComparator(x - eps).compare(Rational(2, 3)), std::strong_ordering::greater);
}

TEST(AreaClosedForm, Examples)
{
    EXPECT_EQ(area_closed_form({3, 0, -1, 1}).q, Rational(4, 3));
    EXPECT_EQ(area_closed_form({3, 1, -1, 1}).q, Rational(2, 3));
    EXPECT_EQ(area_closed_form({3, 1, 0, 1}).q, Rational(1, 3));
    EXPECT_EQ(area_closed_form({15, 5, -5, 1}).q, Rational(24));
    EXPECT_EQ(area_closed_form({15, 3, -1, 3}).q, Rational(16));
    EXPECT_EQ(area_closed_form({3, 1, -1, 1}).symbolic(), "2/3 · π");
    EXPECT_EQ(area_decimal(area_closed_form({3, 1, -1, 1})), "2.094395102393195");
    EXPECT_THROW(area_closed_form({3, 1, 1, 1}), domain_error);
    EXPECT_THROW(area_closed_form({12, 1, 0, 1}), domain_error);
    EXPECT_THROW(area_closed_form({15, 1, 0, 5}), domain_error);
}

TEST(AreaViaOrder, LocalFactorExamples)
{
    const OrderAreaReport a = area_via_order_report({3, 1, -1, 1});
    EXPECT_EQ(a.reduced_disc, 4);
    ASSERT_EQ(a.local.size(), 1U);
    EXPECT_EQ(a.local[0].p, 2U);
    EXPECT_EQ(a.local[0].eichler, -1);
    EXPECT_EQ(a.local[0].index, 1);
    EXPECT_EQ(a.local[0].lambda, Rational(1, 2));
    EXPECT_EQ(a.area.q, Rational(2, 3));

    const OrderAreaReport b = area_via_order_report({3, 0, -1, 1});
    EXPECT_EQ(b.reduced_disc, 3);
    ASSERT_EQ(b.local.size(), 1U);
    EXPECT_EQ(b.local[0].lambda, Rational(4, 3));
    EXPECT_EQ(b.area.q, Rational(4, 3));

    EXPECT_EQ(area_via_order({15, 5, -5, 3}).q, Rational(24));
    EXPECT_EQ(area_via_order({15, 5, -5, 1}).q, Rational(24));
}

TEST(Areas, PipelinesAgreeAndAreRIndependent)
{
    for (std::int64_t d : {3, 7, 11, 15, 19, 23, 35}) {
        for (const SurfaceIndex& s : surfaces_up_to_D(d, 150)) {
            const ExactArea closed = area_closed_form(s);
            EXPECT_GT(closed.q.sign(), 0);
            EXPECT_EQ(closed, area_via_order(s)) << describe(s);
            EXPECT_EQ(closed, area_closed_form({s.d, s.m, s.c, 1})) << describe(s);
        }
    }
}

TEST(Areas, SmallestAreasForThree)
{
    std::set<std::string> seen;
    for (const SurfaceIndex& s : surfaces_up_to_D(3, 12)) seen.insert(area_closed_form(s).q.str());
    EXPECT_TRUE(seen.count("1/3"));
    EXPECT_TRUE(seen.count("2/3"));
    EXPECT_TRUE(seen.count("4/3"));
}
