#pragma once

// Exact integer/rational arithmetic and the multiplicative number theory
// used throughout the library: factorization, divisor statistics,
// Legendre/Kronecker symbols and the quadratic character chi_{-d}.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tgsurf/error.hpp"

namespace tgsurf {

using BigInt = mpz_class;

inline BigInt to_big(std::int64_t v) { return BigInt(static_cast<long>(v)); }

/// Arbitrary precision rational, always stored in lowest terms with a
/// positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : v_(static_cast<long>(n)) {} // NOLINT(implicit)
    Rational(int n) : v_(static_cast<long>(n)) {}          // NOLINT(implicit)
    Rational(const BigInt& n) : v_(n) {}                    // NOLINT(implicit)
    Rational(const BigInt& num, const BigInt& den)
    {
        if (den == 0) throw domain_error("Rational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    Rational(std::int64_t num, std::int64_t den) : Rational(to_big(num), to_big(den)) {}

    /// Parses a plain decimal literal such as "1.1", "-3", "2.5e3".
    static Rational from_decimal(std::string_view text);

    BigInt numerator() const { return v_.get_num(); }
    BigInt denominator() const { return v_.get_den(); }
    const mpq_class& raw() const { return v_; }

    int sign() const { return sgn(v_); }
    bool is_integer() const { return v_.get_den() == 1; }
    double to_double() const { return v_.get_d(); }

    /// "n" for integers, "n/d" otherwise.
    std::string str() const
    {
        if (is_integer()) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o)
    {
        if (o.sign() == 0) throw domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const
    {
        Rational r;
        r.v_ = -v_;
        return r;
    }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        const int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class v_{0};
};

inline Rational Rational::from_decimal(std::string_view text)
{
    auto fail = [&] { return domain_error("not a decimal literal: '" + std::string(text) + "'"); };
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
    std::string digits;
    long frac_digits = 0;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
        const char ch = text[i];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            digits.push_back(ch);
            if (seen_point) ++frac_digits;
        } else if (ch == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (digits.empty()) throw fail();
    long exponent = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool exp_negative = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) exp_negative = text[i++] == '-';
        if (i == text.size()) throw fail();
        for (; i < text.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(text[i])) || exponent > 100000) throw fail();
            exponent = exponent * 10 + (text[i] - '0');
        }
        if (exp_negative) exponent = -exponent;
    }
    if (i != text.size()) throw fail();

    BigInt num(digits, 10);
    const long shift = exponent - frac_digits;
    BigInt pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    Rational r = shift >= 0 ? Rational(BigInt(num * pow10)) : Rational(num, pow10);
    return negative ? -r : r;
}

/// Rounds x to `decimals` places after the point (half away from zero).
inline std::string to_decimal_string(const Rational& x, int decimals)
{
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(decimals));
    const mpq_class scaled = abs(x.raw()) * scale + mpq_class(1, 2);
    BigInt rounded;
    mpz_fdiv_q(rounded.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    std::string s = rounded.get_str();
    if (decimals > 0) {
        if (s.size() <= static_cast<std::size_t>(decimals))
            s.insert(0, static_cast<std::size_t>(decimals) + 1 - s.size(), '0');
        s.insert(s.size() - static_cast<std::size_t>(decimals), ".");
    }
    if (x.sign() < 0 && rounded != 0) s.insert(0, "-");
    return s;
}

// ---------------------------------------------------------------------------
// Modular arithmetic on 64-bit words.

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m)
{
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1U) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1U;
    }
    return result;
}

/// Non-negative residue of a signed value.
inline std::uint64_t mod_floor(std::int64_t a, std::uint64_t m)
{
    const auto r = static_cast<std::int64_t>(static_cast<__int128>(a) % static_cast<__int128>(m));
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
}

// ---------------------------------------------------------------------------
// Primes.

/// Smallest-prime-factor table up to a fixed limit. Immutable after
/// construction, so one instance may be shared freely between threads.
class PrimeSieve {
public:
    explicit PrimeSieve(std::uint32_t limit) : limit_(std::max<std::uint32_t>(limit, 2)), spf_(limit_ + 1, 0)
    {
        for (std::uint32_t i = 2; i <= limit_; ++i) {
            if (spf_[i] == 0) {
                spf_[i] = i;
                primes_.push_back(i);
            }
            for (std::uint32_t p : primes_) {
                const std::uint64_t ip = static_cast<std::uint64_t>(i) * p;
                if (p > spf_[i] || ip > limit_) break;
                spf_[ip] = p;
            }
        }
    }

    std::uint32_t limit() const { return limit_; }
    const std::vector<std::uint32_t>& primes() const { return primes_; }
    std::uint32_t smallest_factor(std::uint32_t n) const { return spf_.at(n); }
    bool is_prime(std::uint32_t n) const { return n >= 2 && n <= limit_ && spf_[n] == n; }

private:
    std::uint32_t limit_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint32_t> primes_;
};

/// Process-wide sieve up to 10^6.
inline const PrimeSieve& default_sieve()
{
    static const PrimeSieve sieve(1'000'000);
    return sieve;
}

/// Deterministic Miller-Rabin; the fixed base set is exact for all 64-bit n.
inline bool is_prime(std::uint64_t n)
{
    const auto& sieve = default_sieve();
    if (n <= sieve.limit()) return sieve.is_prime(static_cast<std::uint32_t>(n));
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL})
        if (n % p == 0) return false;
    std::uint64_t odd = n - 1;
    int twos = 0;
    while ((odd & 1U) == 0) {
        odd >>= 1U;
        ++twos;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = pow_mod(a, odd, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < twos && witness; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) witness = false;
        }
        if (witness) return false;
    }
    return true;
}

/// Primes p <= limit, via a plain bit sieve (no factor table).
inline std::vector<std::uint32_t> primes_up_to(std::uint32_t limit)
{
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

struct PrimePower {
    std::uint64_t prime;
    unsigned exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// n = prod prime^exponent, primes strictly increasing; empty for n = 1.
struct Factorization {
    std::uint64_t value = 1;
    std::vector<PrimePower> factors;

    std::vector<std::uint64_t> primes() const
    {
        std::vector<std::uint64_t> out;
        out.reserve(factors.size());
        for (const auto& f : factors) out.push_back(f.prime);
        return out;
    }
};

namespace detail {

// Brent's variant of Pollard rho; n is an odd composite with no factor
// below the sieve limit.
inline std::uint64_t pollard_brent(std::uint64_t n)
{
    for (std::uint64_t c = 1;; ++c) {
        auto f = [&](std::uint64_t x) { return (mul_mod(x, x, n) + c) % n; };
        std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
        std::uint64_t r = 1;
        constexpr std::uint64_t block = 128;
        do {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = f(y);
            std::uint64_t k = 0;
            do {
                ys = y;
                for (std::uint64_t i = 0; i < std::min(block, r - k); ++i) {
                    y = f(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += block;
            } while (k < r && g == 1);
            r <<= 1U;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void split_large(std::uint64_t n, std::vector<std::uint64_t>& out)
{
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    const std::uint64_t g = pollard_brent(n);
    split_large(g, out);
    split_large(n / g, out);
}

} // namespace detail

/// Supported range 1 <= n <= 2^63. Sieve lookup below 10^6, trial
/// division by the sieve primes beyond, Pollard-Brent for what remains.
inline Factorization factorize(std::uint64_t n)
{
    if (n == 0) throw domain_error("factorize: n must be positive");
    if (n > (std::uint64_t{1} << 63U)) throw domain_error("factorize: n exceeds 2^63");
    Factorization out;
    out.value = n;
    const auto& sieve = default_sieve();
    auto push = [&](std::uint64_t p) {
        if (!out.factors.empty() && out.factors.back().prime == p)
            ++out.factors.back().exponent;
        else
            out.factors.push_back({p, 1});
    };
    std::uint64_t rest = n;
    if (rest <= sieve.limit()) {
        while (rest > 1) {
            const std::uint32_t p = sieve.smallest_factor(static_cast<std::uint32_t>(rest));
            push(p);
            rest /= p;
        }
        return out;
    }
    for (std::uint32_t p : sieve.primes()) {
        if (static_cast<std::uint64_t>(p) * p > rest) break;
        while (rest % p == 0) {
            push(p);
            rest /= p;
        }
    }
    if (rest > 1) {
        std::vector<std::uint64_t> big;
        detail::split_large(rest, big);
        std::sort(big.begin(), big.end());
        for (std::uint64_t p : big) push(p);
    }
    return out;
}

struct DivisorStats {
    std::uint64_t tau = 1;
    unsigned omega = 0;
    std::vector<std::uint64_t> divisors;
};

inline DivisorStats divisor_stats(std::uint64_t n)
{
    const Factorization f = factorize(n);
    DivisorStats s;
    s.omega = static_cast<unsigned>(f.factors.size());
    s.divisors = {1};
    for (const auto& [p, e] : f.factors) {
        s.tau *= e + 1;
        const std::size_t base = s.divisors.size();
        std::uint64_t pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) s.divisors.push_back(s.divisors[i] * pk);
        }
    }
    std::sort(s.divisors.begin(), s.divisors.end());
    return s;
}

inline unsigned omega(std::uint64_t n) { return static_cast<unsigned>(factorize(n).factors.size()); }

inline bool is_square_free(std::uint64_t n)
{
    if (n == 0) return false;
    const auto f = factorize(n);
    return std::all_of(f.factors.begin(), f.factors.end(), [](const PrimePower& pp) { return pp.exponent == 1; });
}

inline std::uint64_t totient(std::uint64_t n)
{
    std::uint64_t phi = n;
    for (const auto& [p, e] : factorize(n).factors) phi = phi / p * (p - 1);
    return phi;
}

/// Radical: product of the distinct primes of n.
inline std::uint64_t radical(std::uint64_t n)
{
    std::uint64_t r = 1;
    for (const auto& [p, e] : factorize(n).factors) r *= p;
    return r;
}

// ---------------------------------------------------------------------------
// Quadratic symbols.

/// Legendre symbol (a/p) for an odd prime p, via Euler's criterion.
inline int legendre(std::int64_t a, std::uint64_t p)
{
    if (p < 3 || (p & 1U) == 0 || !is_prime(p)) throw domain_error("legendre: modulus must be an odd prime");
    const std::uint64_t r = mod_floor(a, p);
    if (r == 0) return 0;
    return pow_mod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

/// Kronecker symbol (n/2): 0 for even n, +1 for n = +-1 mod 8, -1 for n = +-3 mod 8.
inline int kronecker_at_2(std::int64_t n)
{
    const std::uint64_t r = mod_floor(n, 8);
    if ((r & 1U) == 0) return 0;
    return (r == 1 || r == 7) ? 1 : -1;
}

/// The quadratic character chi_{-d} of Q(sqrt(-d)), for square-free
/// d = 3 mod 4 or d = 4. Composite arguments use the multiplicative extension.
class CharacterChi {
public:
    explicit CharacterChi(std::int64_t d) : d_(d)
    {
        if (d == 4) return;
        if (d <= 0 || d % 4 != 3 || !is_square_free(static_cast<std::uint64_t>(d)))
            throw domain_error("chi_{-d}: d must be 4 or square-free and = 3 mod 4, got " + std::to_string(d));
    }

    std::int64_t d() const { return d_; }

    int at_prime(std::uint64_t p) const
    {
        if (d_ == 4) {
            if (p == 2) return 0;
            return (p % 4 == 1) ? 1 : -1;
        }
        if (static_cast<std::uint64_t>(d_) % p == 0) return 0;
        if (p == 2) return (((d_ * d_ - 1) / 8) % 2 == 0) ? 1 : -1;
        return legendre(-d_, p);
    }

    int operator()(std::uint64_t n) const
    {
        if (n == 0) throw domain_error("chi_{-d}: argument must be positive");
        int value = 1;
        for (const auto& [p, e] : factorize(n).factors) {
            const int v = at_prime(p);
            if (v == 0) return 0;
            if (v < 0 && (e % 2 == 1)) value = -value;
        }
        return value;
    }

private:
    std::int64_t d_;
};

inline int chi(const CharacterChi& character, std::uint64_t n) { return character(n); }

inline std::int64_t gcd3(std::int64_t a, std::int64_t b, std::int64_t c) { return std::gcd(std::gcd(a, b), c); }

/// Extended Euclid: returns g = gcd(a, b) >= 0 with a*x + b*y = g.
inline std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y)
{
    std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        const std::int64_t q = old_r / r;
        old_r -= q * r;
        std::swap(old_r, r);
        old_s -= q * s;
        std::swap(old_s, s);
        old_t -= q * t;
        std::swap(old_t, t);
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    x = old_s;
    y = old_t;
    return old_r;
}

/// Floor division for signed operands.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

} // namespace tgsurf
