#pragma once

// Exact arithmetic in Q(sqrt(-d)) and 2x2 matrices over it.

#include <array>
#include <cstdint>
#include <string>

#include "tgsurf/ntkernel.hpp"

namespace tgsurf {

/// re + im * sqrt(-d).
class QuadNumber {
public:
    QuadNumber() = default;
    QuadNumber(std::int64_t d, Rational re, Rational im = 0) : d_(d), re_(std::move(re)), im_(std::move(im)) {}

    std::int64_t d() const { return d_; }
    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    QuadNumber conj() const { return {d_, re_, -im_}; }
    Rational norm() const { return re_ * re_ + Rational(d_) * im_ * im_; }
    bool is_zero() const { return re_.sign() == 0 && im_.sign() == 0; }

    /// Membership in O_d = Z[(1+sqrt(-d))/2] for d = 3 mod 4: 2re, 2im
    /// integers of equal parity.
    bool is_integral() const
    {
        const Rational two_re = re_ * 2, two_im = im_ * 2;
        if (!two_re.is_integer() || !two_im.is_integer()) return false;
        const BigInt diff = two_re.numerator() - two_im.numerator();
        return mpz_even_p(diff.get_mpz_t()) != 0;
    }

    QuadNumber& operator+=(const QuadNumber& o)
    {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    QuadNumber& operator-=(const QuadNumber& o)
    {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    friend QuadNumber operator+(QuadNumber a, const QuadNumber& b) { return a += b; }
    friend QuadNumber operator-(QuadNumber a, const QuadNumber& b) { return a -= b; }
    friend QuadNumber operator*(const QuadNumber& a, const QuadNumber& b)
    {
        const std::int64_t d = a.d_ != 0 ? a.d_ : b.d_;
        return {d, a.re_ * b.re_ - Rational(d) * a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend QuadNumber operator*(const Rational& s, const QuadNumber& a) { return {a.d_, s * a.re_, s * a.im_}; }
    friend QuadNumber operator/(const QuadNumber& a, const QuadNumber& b)
    {
        const Rational n = b.norm();
        const QuadNumber t = a * b.conj();
        return {t.d_, t.re_ / n, t.im_ / n};
    }
    QuadNumber operator-() const { return {d_, -re_, -im_}; }

    friend bool operator==(const QuadNumber& a, const QuadNumber& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

    std::string str() const { return "(" + re_.str() + ")+(" + im_.str() + ")*sqrt(-" + std::to_string(d_) + ")"; }

private:
    std::int64_t d_ = 0;
    Rational re_;
    Rational im_;
};

/// 2x2 matrix [[m00, m01], [m10, m11]] over Q(sqrt(-d)).
struct Mat2 {
    std::array<QuadNumber, 4> e;

    const QuadNumber& at(int row, int col) const { return e[static_cast<std::size_t>(2 * row + col)]; }

    static Mat2 identity(std::int64_t d) { return {{QuadNumber(d, 1), QuadNumber(d, 0), QuadNumber(d, 0), QuadNumber(d, 1)}}; }

    QuadNumber det() const { return e[0] * e[3] - e[1] * e[2]; }

    /// Conjugate transpose.
    Mat2 adjoint() const { return {{e[0].conj(), e[2].conj(), e[1].conj(), e[3].conj()}}; }

    Mat2 inverse() const
    {
        const QuadNumber dt = det();
        return {{e[3] / dt, -e[1] / dt, -e[2] / dt, e[0] / dt}};
    }

    bool is_integral() const
    {
        for (const auto& x : e)
            if (!x.is_integral()) return false;
        return true;
    }

    friend Mat2 operator*(const Mat2& a, const Mat2& b)
    {
        return {{a.e[0] * b.e[0] + a.e[1] * b.e[2], a.e[0] * b.e[1] + a.e[1] * b.e[3],
                 a.e[2] * b.e[0] + a.e[3] * b.e[2], a.e[2] * b.e[1] + a.e[3] * b.e[3]}};
    }
    friend Mat2 operator*(const QuadNumber& s, const Mat2& a) { return {{s * a.e[0], s * a.e[1], s * a.e[2], s * a.e[3]}}; }
    friend bool operator==(const Mat2&, const Mat2&) = default;
};

} // namespace tgsurf
