#include <gtest/gtest.h>

#include <random>

#include "tgsurf/ntkernel.hpp"

using namespace tgsurf;

namespace {

std::vector<std::pair<std::uint64_t, unsigned>> trial_factor(std::uint64_t n)
{
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

} // namespace

TEST(Rational, CanonicalForm)
{
    const Rational q(6, -4);
    EXPECT_EQ(q.str(), "-3/2");
    EXPECT_EQ(q.numerator(), -3);
    EXPECT_EQ(q.denominator(), 2);
    EXPECT_TRUE(Rational(8, 4).is_integer());
    EXPECT_EQ(Rational(8, 4).str(), "2");
    EXPECT_THROW(Rational(1, 0), domain_error);
    EXPECT_THROW(Rational(1) / Rational(0), domain_error);
}

TEST(Rational, MatchesCrossMultiplication)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> dist(-100000, 100000);
    for (int i = 0; i < 2000; ++i) {
        const std::int64_t a = dist(rng), b = dist(rng) | 1, c = dist(rng), e = dist(rng) | 1;
        const Rational x(a, b), y(c, e);
        // (a/b + c/e) * b e = a e + c b
        EXPECT_EQ((x + y) * Rational(b) * Rational(e), Rational(a * e + c * b));
        EXPECT_EQ((x - y) * Rational(b) * Rational(e), Rational(a * e - c * b));
        EXPECT_EQ(x * y * Rational(b) * Rational(e), Rational(a * c));
        if (c != 0) EXPECT_EQ(x / y, Rational(a * e, b * c));
        EXPECT_EQ(x < y, static_cast<__int128>(a) * e * b * e < static_cast<__int128>(c) * b * b * e);
    }
}

TEST(Rational, FromDecimal)
{
    EXPECT_EQ(Rational::from_decimal("1.1"), Rational(11, 10));
    EXPECT_EQ(Rational::from_decimal("-3"), Rational(-3));
    EXPECT_EQ(Rational::from_decimal("2.5e3"), Rational(2500));
    EXPECT_EQ(Rational::from_decimal("1e-2"), Rational(1, 100));
    EXPECT_EQ(Rational::from_decimal("+.5"), Rational(1, 2));
    EXPECT_EQ(Rational::from_decimal("100000"), Rational(100000));
    for (const char* bad : {"", "abc", "1..2", "1e", "1.2.3", "--1", "1e+", " 1"}) EXPECT_THROW(Rational::from_decimal(bad), domain_error) << bad;
}

TEST(Rational, DecimalRounding)
{
    EXPECT_EQ(to_decimal_string(Rational(1, 3), 5), "0.33333");
    EXPECT_EQ(to_decimal_string(Rational(2, 3), 3), "0.667");
    EXPECT_EQ(to_decimal_string(Rational(-2, 3), 3), "-0.667");
    EXPECT_EQ(to_decimal_string(Rational(1, 2), 0), "1");
    EXPECT_EQ(to_decimal_string(Rational(7), 2), "7.00");
    EXPECT_EQ(to_decimal_string(Rational(1, 1000), 2), "0.00");
}

TEST(Primes, MillerRabinAgreesWithSieve)
{
    const PrimeSieve& sieve = default_sieve();
    for (std::uint32_t n = 0; n < 200000; ++n) EXPECT_EQ(is_prime(n), sieve.is_prime(n)) << n;
    EXPECT_FALSE(is_prime(561));
    EXPECT_FALSE(is_prime(3215031751ULL));
    EXPECT_TRUE(is_prime((1ULL << 61) - 1));
    EXPECT_TRUE(is_prime(1000000007ULL));
    EXPECT_FALSE(is_prime(1000000007ULL * 998244353ULL));
}

TEST(Primes, PrimesUpTo)
{
    EXPECT_EQ(primes_up_to(30), (std::vector<std::uint32_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29}));
    EXPECT_EQ(primes_up_to(1'000'000).size(), 78498U);
}

TEST(Factorize, AgreesWithTrialDivision)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::uint64_t> dist(1, 1'000'000'000'000ULL);
    for (int i = 0; i < 300; ++i) {
        const std::uint64_t n = dist(rng);
        const auto f = factorize(n);
        const auto expected = trial_factor(n);
        ASSERT_EQ(f.factors.size(), expected.size()) << n;
        for (std::size_t k = 0; k < expected.size(); ++k) {
            EXPECT_EQ(f.factors[k].prime, expected[k].first);
            EXPECT_EQ(f.factors[k].exponent, expected[k].second);
        }
    }
}

TEST(Factorize, LargeSemiprimes)
{
    const auto f = factorize(1000000007ULL * 998244353ULL);
    ASSERT_EQ(f.factors.size(), 2U);
    EXPECT_EQ(f.factors[0].prime, 998244353ULL);
    EXPECT_EQ(f.factors[1].prime, 1000000007ULL);
    EXPECT_THROW(factorize(0), domain_error);
    EXPECT_TRUE(factorize(1).factors.empty());
}

TEST(Divisors, BasicFunctions)
{
    const auto s = divisor_stats(15);
    EXPECT_EQ(s.tau, 4U);
    EXPECT_EQ(s.omega, 2U);
    EXPECT_EQ(s.divisors, (std::vector<std::uint64_t>{1, 3, 5, 15}));
    EXPECT_EQ(divisor_stats(3).tau, 2U);
    EXPECT_EQ(totient(15), 8U);
    EXPECT_EQ(totient(1), 1U);
    EXPECT_EQ(radical(12), 6U);
    EXPECT_EQ(radical(1), 1U);
    EXPECT_TRUE(is_square_free(15));
    EXPECT_FALSE(is_square_free(12));
    EXPECT_EQ(omega(60), 3U);
}

TEST(Symbols, LegendreIsEulerCriterion)
{
    for (std::uint64_t p : {3ULL, 5ULL, 7ULL, 101ULL, 1009ULL}) {
        std::vector<bool> square(p, false);
        for (std::uint64_t x = 1; x < p; ++x) square[x * x % p] = true;
        for (std::int64_t a = -50; a < 50; ++a) {
            const std::uint64_t r = mod_floor(a, p);
            const int expected = r == 0 ? 0 : (square[r] ? 1 : -1);
            EXPECT_EQ(legendre(a, p), expected) << a << " mod " << p;
        }
    }
    EXPECT_THROW(legendre(1, 2), domain_error);
    EXPECT_THROW(legendre(1, 9), domain_error);
}

TEST(Symbols, KroneckerAtTwo)
{
    EXPECT_EQ(kronecker_at_2(1), 1);
    EXPECT_EQ(kronecker_at_2(7), 1);
    EXPECT_EQ(kronecker_at_2(-1), 1);
    EXPECT_EQ(kronecker_at_2(3), -1);
    EXPECT_EQ(kronecker_at_2(5), -1);
    EXPECT_EQ(kronecker_at_2(12), 0);
}

TEST(Character, ValuesAtSmallPrimes)
{
    const CharacterChi c3(3), c7(7), c4(4);
    EXPECT_EQ(c3.at_prime(2), -1);
    EXPECT_EQ(c3.at_prime(3), 0);
    EXPECT_EQ(c3.at_prime(7), 1);
    EXPECT_EQ(c3.at_prime(5), -1);
    EXPECT_EQ(c7.at_prime(2), 1);
    EXPECT_EQ(c4.at_prime(2), 0);
    EXPECT_EQ(c4.at_prime(5), 1);
    EXPECT_EQ(c4.at_prime(3), -1);
    EXPECT_THROW(CharacterChi(12), domain_error);
    EXPECT_THROW(CharacterChi(5), domain_error);
    EXPECT_THROW(c3(0), domain_error);
}

TEST(Character, IsAPeriodicMultiplicativeCharacter)
{
    for (std::int64_t d : {3, 7, 11, 15, 19, 23, 35, 4}) {
        const CharacterChi chi(d);
        const auto q = static_cast<std::uint64_t>(d == 4 ? 4 : d);
        for (std::uint64_t n = 1; n < 300; ++n) {
            EXPECT_EQ(chi(n), chi(n + q)) << "d=" << d << " n=" << n;
            for (std::uint64_t k = 1; k < 20; ++k) EXPECT_EQ(chi(n * k), chi(n) * chi(k));
        }
    }
}

TEST(Integers, ExtGcdAndFloorDiv)
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int64_t> dist(-1000000, 1000000);
    for (int i = 0; i < 1000; ++i) {
        const std::int64_t a = dist(rng), b = dist(rng);
        std::int64_t x = 0, y = 0;
        const std::int64_t g = ext_gcd(a, b, x, y);
        EXPECT_EQ(g, std::gcd(a, b));
        EXPECT_EQ(a * x + b * y, g);
    }
    EXPECT_EQ(floor_div(-7, 2), -4);
    EXPECT_EQ(floor_div(7, 2), 3);
    EXPECT_EQ(floor_div(-8, 2), -4);
    EXPECT_EQ(floor_div(7, -2), -4);
    EXPECT_EQ(gcd3(12, 18, 8), 2);
    EXPECT_EQ(mod_floor(-1, 8), 7U);
}
