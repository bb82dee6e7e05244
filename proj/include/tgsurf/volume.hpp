#pragma once

// Exact areas q * pi of the surfaces S_{m,c,r}: once from the closed-form
// area formula, once from the covolume formula applied to the constructed
// quaternion order with brute-force local data. Also the certified
// comparison of q * pi against decimal thresholds.

#include <compare>
#include <cstdint>
#include <mutex>
#include <string>
#include <utility>

#include "tgsurf/error.hpp"
#include "tgsurf/hermitian.hpp"
#include "tgsurf/ntkernel.hpp"
#include "tgsurf/quatorder.hpp"

namespace tgsurf {

/// area = q * pi, q > 0.
struct ExactArea {
    Rational q;

    /// "2/3 · π"
    std::string symbolic() const { return q.str() + " · π"; }

    friend bool operator==(const ExactArea&, const ExactArea&) = default;
    friend auto operator<=>(const ExactArea& a, const ExactArea& b) { return a.q <=> b.q; }
};

// ---------------------------------------------------------------------------
// pi

/// lo < pi < hi.
struct PiInterval {
    Rational lo;
    Rational hi;
};

namespace detail {

// floor(scale * atan(1/x)) up to an error of at most `err` units, returned
// alongside the value.
inline std::pair<BigInt, long> arctan_inverse_fixed(long x, const BigInt& scale)
{
    BigInt sum = 0;
    BigInt power = scale / x; // scale / x^(2k+1)
    const long x2 = x * x;
    long terms = 0;
    for (long k = 0; power != 0; ++k) {
        const BigInt term = power / (2 * k + 1);
        if (k % 2 == 0)
            sum += term;
        else
            sum -= term;
        power /= x2;
        ++terms;
    }
    return {sum, 2 * terms + 2};
}

} // namespace detail

/// Machin's formula pi = 16 atan(1/5) - 4 atan(1/239) in fixed point with a
/// rigorous truncation/rounding bound; the interval width is about 10^-digits.
inline PiInterval pi_interval(unsigned digits)
{
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits + 5);
    const auto [a5, e5] = detail::arctan_inverse_fixed(5, scale);
    const auto [a239, e239] = detail::arctan_inverse_fixed(239, scale);
    const BigInt value = 16 * a5 - 4 * a239;
    const BigInt err = BigInt(16 * e5 + 4 * e239);
    return {Rational(BigInt(value - err), scale), Rational(BigInt(value + err), scale)};
}

/// Decides sign(q * pi - X) for a fixed X > 0, refining pi until decisive.
/// q * pi is never a rational number for q != 0, so refinement terminates.
class ThresholdComparator {
public:
    explicit ThresholdComparator(Rational threshold) : x_(std::move(threshold))
    {
        if (x_.sign() <= 0) throw domain_error("threshold must be positive");
        refine(40);
    }

    static ThresholdComparator from_decimal(std::string_view text) { return ThresholdComparator(Rational::from_decimal(text)); }

    const Rational& threshold() const { return x_; }

    /// less if q * pi < X, greater if q * pi > X.
    std::strong_ordering compare(const Rational& q) const
    {
        if (q.sign() <= 0) return std::strong_ordering::less;
        Bounds b;
        {
            std::lock_guard lock(mu_);
            b = bounds_;
        }
        for (;;) {
            if (q < b.below) return std::strong_ordering::less;
            if (q > b.above) return std::strong_ordering::greater;
            std::lock_guard lock(mu_);
            if (bounds_.digits == b.digits) refine(bounds_.digits * 2);
            b = bounds_;
        }
    }

    bool less(const Rational& q) const { return compare(q) == std::strong_ordering::less; }

    ThresholdComparator(const ThresholdComparator& o) : x_(o.x_)
    {
        std::lock_guard lock(o.mu_);
        bounds_ = o.bounds_;
    }

private:
    struct Bounds {
        unsigned digits = 0;
        Rational below; // X / pi_hi < X / pi
        Rational above; // X / pi_lo > X / pi
    };

    void refine(unsigned digits) const
    {
        const PiInterval pi = pi_interval(digits);
        bounds_ = {digits, x_ / pi.hi, x_ / pi.lo};
    }

    Rational x_;
    mutable std::mutex mu_;
    mutable Bounds bounds_;
};

inline std::strong_ordering compare_to_threshold(const ExactArea& area, std::string_view x_decimal)
{
    return ThresholdComparator::from_decimal(x_decimal).compare(area.q);
}

/// q * pi rounded to `decimals` places, with pi taken from `pi` (whose width
/// must be far below 10^-decimals / q).
inline std::string area_decimal(const ExactArea& area, const PiInterval& pi, int decimals)
{
    return to_decimal_string(area.q * ((pi.lo + pi.hi) / Rational(2)), decimals);
}

inline std::string area_decimal(const ExactArea& area, int decimals = 15)
{
    return area_decimal(area, pi_interval(static_cast<unsigned>(decimals) + 20), decimals);
}

// ---------------------------------------------------------------------------
// Areas

/// Closed form
///   q = (d/d0^2)(1/3) 2^{-omega(gcd(d/d0, D))} prod_{p | d/d0} (1-p^-2)/(1-(D/p)p^-1)
///       * D prod_{p | D, p !| d} (1 + chi(p)/p).
/// Never reads r.
inline ExactArea area_closed_form(const SurfaceIndex& idx)
{
    validate(idx);
    const std::int64_t d = idx.d;
    const auto [d0, D] = d0_and_D(d, idx.m, idx.c);
    const std::int64_t e = d / d0;
    Rational q = Rational(d, 3 * d0 * d0);
    q /= Rational(std::int64_t{1} << omega(static_cast<std::uint64_t>(std::gcd(e, D))));
    for (const auto& [p, k] : factorize(static_cast<std::uint64_t>(e)).factors) {
        const auto pp = static_cast<std::int64_t>(p);
        q *= Rational(pp * pp - 1, pp * pp) / Rational(pp - legendre(D, p), pp);
    }
    q *= Rational(D);
    const CharacterChi chi_d(d);
    for (const auto& [p, k] : factorize(static_cast<std::uint64_t>(D)).factors) {
        if (d % static_cast<std::int64_t>(p) == 0) continue;
        const auto pp = static_cast<std::int64_t>(p);
        q *= Rational(pp + chi_d.at_prime(p), pp);
    }
    return {q};
}

/// Local data used by the order route at one prime of the reduced discriminant.
struct LocalFactor {
    std::uint64_t p = 0;
    int eichler = 0;
    int index = 1;
    Rational lambda; // (1 - p^-2) / (1 - eichler p^-1)
};

struct OrderAreaReport {
    QuaternionOrder order;
    std::int64_t reduced_disc = 1;
    std::vector<LocalFactor> local;
    ExactArea area;
};

/// Covolume of the norm-one units of the order: (1/3) Drd prod lambda(p) / prod index(p),
/// with Eichler symbols and norm indices taken from enumeration over M/pM
/// (the norm index at 2 is 1).
inline OrderAreaReport area_via_order_report(const SurfaceIndex& idx)
{
    OrderAreaReport rep;
    rep.order = build_order(pullback_circle(idx), idx.d);
    rep.reduced_disc = reduced_discriminant(rep.order);
    Rational q = Rational(rep.reduced_disc, 3);
    for (const auto& [p, k] : factorize(static_cast<std::uint64_t>(rep.reduced_disc)).factors) {
        LocalFactor f;
        f.p = p;
        f.eichler = eichler_symbol_bruteforce(rep.order, p);
        f.index = nrd_index_bruteforce(rep.order, p);
        const auto pp = static_cast<std::int64_t>(p);
        f.lambda = Rational(pp * pp - 1, pp * pp) / Rational(pp - f.eichler, pp);
        q *= f.lambda / Rational(f.index);
        rep.local.push_back(f);
    }
    rep.area = {q};
    return rep;
}

inline ExactArea area_via_order(const SurfaceIndex& idx) { return area_via_order_report(idx).area; }

} // namespace tgsurf
