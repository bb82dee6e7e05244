#pragma once

// Circles a|z|^2 + 2 Re(b sqrt(-d) conj(z)) + c0 = 0, the canonical
// representatives C_{m,c}, the coset matrices sigma_r and the pulled-back
// circles sigma_r^{-1} C_{m,c} that feed the quaternion order construction.

#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "tgsurf/error.hpp"
#include "tgsurf/imag_quadratic.hpp"
#include "tgsurf/ntkernel.hpp"

namespace tgsurf {

struct HermitianCircle {
    std::int64_t a = 0;
    std::int64_t b = 0; // B = b * sqrt(-d)
    std::int64_t c0 = 0;

    /// |B|^2 - a c0 = b^2 d - a c0; the radius is sqrt of this over |a|.
    std::int64_t discriminant(std::int64_t d) const { return b * b * d - a * c0; }

    Rational radius_squared(std::int64_t d) const
    {
        if (a == 0) throw domain_error("radius of a line is undefined");
        return Rational(discriminant(d), a * a);
    }

    /// Hermitian matrix H with v^* H v = a|z|^2 + 2Re(B conj z) + c0 for v = (z, 1).
    Mat2 matrix(std::int64_t d) const
    {
        const QuadNumber big_b(d, 0, b);
        return {{QuadNumber(d, a), big_b, big_b.conj(), QuadNumber(d, c0)}};
    }

    friend bool operator==(const HermitianCircle&, const HermitianCircle&) = default;
};

/// sigma_r = [[sqrt(-d), r], [v r, -u sqrt(-d)]] with s u - r v = 1 and v even.
struct CosetMatrix {
    std::int64_t d = 0, r = 0, s = 0, u = 0, v = 0;

    /// det(sigma_r) = u d - r^2 v, which equals r.
    std::int64_t determinant() const { return u * d - r * r * v; }

    Mat2 matrix() const
    {
        return {{QuadNumber(d, 0, 1), QuadNumber(d, r), QuadNumber(d, v * r), QuadNumber(d, 0, -u)}};
    }
};

struct SurfaceIndex {
    std::int64_t d = 0;
    std::int64_t m = 0;
    std::int64_t c = 0;
    std::int64_t r = 1;

    friend bool operator==(const SurfaceIndex&, const SurfaceIndex&) = default;
};

namespace detail {

inline std::int64_t narrow(__int128 v, const char* what)
{
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw domain_error(std::string(what) + ": 64-bit overflow");
    return static_cast<std::int64_t>(v);
}

} // namespace detail

inline void require_bianchi_d(std::int64_t d)
{
    if (d <= 0 || d % 4 != 3 || !is_square_free(static_cast<std::uint64_t>(d)))
        throw domain_error("d must be square-free and = 3 mod 4, got " + std::to_string(d));
}

/// gcd(m, d) with the convention gcd(0, d) = d.
inline std::int64_t gcd_md(std::int64_t m, std::int64_t d) { return std::gcd(m, d); }

/// Throws "degenerate circle" unless m^2 > c d.
inline void require_positive_radius(std::int64_t d, std::int64_t m, std::int64_t c)
{
    if (static_cast<__int128>(m) * m <= static_cast<__int128>(c) * d)
        throw domain_error("degenerate circle: m^2 <= c d");
}

/// C_{m,c}: d|z|^2 + 2Re(m sqrt(-d) conj z) + d c = 0.
inline HermitianCircle canonical_circle(std::int64_t d, std::int64_t m, std::int64_t c)
{
    require_bianchi_d(d);
    if (m < 0 || m >= d) throw domain_error("m must lie in [0, d)");
    require_positive_radius(d, m, c);
    return {d, m, detail::narrow(static_cast<__int128>(d) * c, "canonical_circle")};
}

/// Coset representative for r | d, r < sqrt(d). Among the even solutions v
/// of (d/r) u - r v = 1 the one of least |v| is taken, ties to positive v.
inline CosetMatrix sigma_r(std::int64_t d, std::int64_t r)
{
    require_bianchi_d(d);
    if (r <= 0 || d % r != 0) throw domain_error("sigma_r: r must be a positive divisor of d");
    if (r * r >= d) throw domain_error("sigma_r: r must be below sqrt(d)");
    const std::int64_t s = d / r;
    std::int64_t x = 0, y = 0;
    ext_gcd(s, r, x, y); // s x + r y = 1
    std::int64_t u0 = x, v0 = -y;
    // u = u0 + r t, v = v0 + s t; s is odd so v's parity alternates in t.
    if (v0 % 2 != 0) {
        u0 += r;
        v0 += s;
    }
    const std::int64_t step = 2 * s;
    const std::int64_t k0 = floor_div(-v0, step);
    CosetMatrix best{d, r, s, 0, 0};
    bool have = false;
    for (std::int64_t k = k0 - 1; k <= k0 + 2; ++k) {
        const std::int64_t v = v0 + step * k;
        const std::int64_t u = u0 + 2 * r * k;
        const auto abs_v = v < 0 ? -v : v;
        const auto best_abs = best.v < 0 ? -best.v : best.v;
        if (!have || abs_v < best_abs || (abs_v == best_abs && v > best.v)) {
            best.u = u;
            best.v = v;
            have = true;
        }
    }
    return best;
}

struct DiscriminantData {
    std::int64_t d0 = 1;
    std::int64_t D = 1;
    friend bool operator==(const DiscriminantData&, const DiscriminantData&) = default;
};

/// d0 = d/(m,d) and D = (m^2 d - c d^2)/(m,d)^2.
inline DiscriminantData d0_and_D(std::int64_t d, std::int64_t m, std::int64_t c)
{
    require_positive_radius(d, m, c);
    const std::int64_t g = gcd_md(m, d);
    const std::int64_t mg = m / g;
    const std::int64_t d0 = d / g;
    const __int128 D = static_cast<__int128>(mg) * mg * d - static_cast<__int128>(c) * d0 * d0;
    return {d0, detail::narrow(D, "d0_and_D")};
}

inline void validate(const SurfaceIndex& idx)
{
    require_bianchi_d(idx.d);
    if (idx.m < 0 || idx.m >= idx.d) throw domain_error("m must lie in [0, d)");
    require_positive_radius(idx.d, idx.m, idx.c);
    if (idx.r <= 0 || idx.d % idx.r != 0 || idx.r * idx.r >= idx.d)
        throw domain_error("r must be a divisor of d below sqrt(d)");
}

/// sigma_r^{-1} C_{m,c}; sigma^* H sigma is divided by r (m, d). The leading coefficient
/// is odd because v is even; it may be negative.
inline HermitianCircle pullback_circle(const SurfaceIndex& idx)
{
    validate(idx);
    const CosetMatrix sg = sigma_r(idx.d, idx.r);
    const __int128 d = idx.d, m = idx.m, c = idx.c, r = sg.r, s = sg.s, u = sg.u, v = sg.v;
    const __int128 g = gcd_md(idx.m, idx.d);
    const __int128 dg = d / g, mg = m / g;
    HermitianCircle out;
    out.a = detail::narrow(dg * (s + 2 * m * v + c * r * v * v), "pullback_circle");
    out.b = detail::narrow(-(mg * (r * v + s * u) + dg * (1 + c * u * v)), "pullback_circle");
    out.c0 = detail::narrow(dg * (c * s * u * u + 2 * m * u + r), "pullback_circle");
    return out;
}

/// gcd(a', b', c0') = 1 and gcd(a', d, c0') = d/(m, d).
inline bool verify_gcd_identities(const SurfaceIndex& idx)
{
    const HermitianCircle h = pullback_circle(idx);
    const std::int64_t expected_d0 = idx.d / gcd_md(idx.m, idx.d);
    return gcd3(h.a, h.b, h.c0) == 1 && gcd3(h.a, idx.d, h.c0) == expected_d0;
}

} // namespace tgsurf
