#pragma once

// The Z-order M in the quaternion algebra (-d, D / Q) attached to a reduced
// circle, its reduced discriminant, local Eichler symbols and reduced-norm
// indices (closed form and by enumeration over M/pM), and the embedding
// rho' into 2x2 matrices over Q(sqrt(-d)).

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tgsurf/error.hpp"
#include "tgsurf/hermitian.hpp"
#include "tgsurf/imag_quadratic.hpp"
#include "tgsurf/ntkernel.hpp"

namespace tgsurf {

/// (-d, D / Q): i^2 = -d, j^2 = D, ij = -ji.
struct QuaternionAlgebra {
    std::int64_t d = 1;
    std::int64_t D = 1;
};

/// t + x i + y j + z ij.
struct QuatElement {
    Rational t, x, y, z;

    static QuatElement one() { return {1, 0, 0, 0}; }

    QuatElement conj() const { return {t, -x, -y, -z}; }

    friend QuatElement operator+(const QuatElement& p, const QuatElement& q)
    {
        return {p.t + q.t, p.x + q.x, p.y + q.y, p.z + q.z};
    }
    friend QuatElement operator-(const QuatElement& p, const QuatElement& q)
    {
        return {p.t - q.t, p.x - q.x, p.y - q.y, p.z - q.z};
    }
    friend QuatElement operator*(const Rational& s, const QuatElement& p) { return {s * p.t, s * p.x, s * p.y, s * p.z}; }
    friend bool operator==(const QuatElement&, const QuatElement&) = default;

    std::string str() const { return t.str() + " + (" + x.str() + ")i + (" + y.str() + ")j + (" + z.str() + ")ij"; }
};

inline QuatElement multiply(const QuaternionAlgebra& alg, const QuatElement& p, const QuatElement& q)
{
    const Rational a(-alg.d), b(alg.D), ab(-alg.d * alg.D);
    return {p.t * q.t + a * p.x * q.x + b * p.y * q.y - ab * p.z * q.z,
            p.t * q.x + p.x * q.t - b * p.y * q.z + b * p.z * q.y,
            p.t * q.y + p.y * q.t + a * p.x * q.z - a * p.z * q.x,
            p.t * q.z + p.z * q.t + p.x * q.y - p.y * q.x};
}

inline Rational trd(const QuatElement& e) { return e.t * 2; }

/// t^2 + d x^2 - D y^2 - d D z^2.
inline Rational nrd(const QuaternionAlgebra& alg, const QuatElement& e)
{
    return e.t * e.t + Rational(alg.d) * e.x * e.x - Rational(alg.D) * e.y * e.y - Rational(alg.d * alg.D) * e.z * e.z;
}

/// Discriminant form trd^2 - 4 nrd.
inline Rational disc_form(const QuaternionAlgebra& alg, const QuatElement& e)
{
    const Rational tr = trd(e);
    return tr * tr - Rational(4) * nrd(alg, e);
}

/// Parameters of the construction: S = [[alpha1, beta], [0, alpha2]] is the
/// column Hermite basis of {(m, l) : a | b d m + c0 l}; a, b, c0 describe the
/// (sign-normalized) circle the order is attached to.
struct OrderParams {
    std::int64_t alpha1 = 1, alpha2 = 1, beta = 0;
    std::int64_t d0 = 1;
    std::int64_t a = 1, b = 0, c0 = 0;
};

struct QuaternionOrder {
    QuaternionAlgebra algebra;
    std::array<QuatElement, 4> basis;
    OrderParams params;

    QuatElement element(const std::array<std::int64_t, 4>& k) const
    {
        QuatElement out{0, 0, 0, 0};
        for (std::size_t i = 0; i < 4; ++i) out = out + Rational(k[i]) * basis[i];
        return out;
    }
};

namespace detail {

/// Solves sum_i k_i basis_i = target over Q.
inline std::array<Rational, 4> solve_coordinates(const std::array<QuatElement, 4>& basis, const QuatElement& target)
{
    auto coords = [](const QuatElement& e) { return std::array<Rational, 4>{e.t, e.x, e.y, e.z}; };
    std::array<std::array<Rational, 5>, 4> m;
    const auto tv = coords(target);
    for (std::size_t row = 0; row < 4; ++row) {
        for (std::size_t col = 0; col < 4; ++col) m[row][col] = coords(basis[col])[row];
        m[row][4] = tv[row];
    }
    for (std::size_t col = 0; col < 4; ++col) {
        std::size_t piv = col;
        while (piv < 4 && m[piv][col].sign() == 0) ++piv;
        if (piv == 4) throw consistency_error("order basis is linearly dependent");
        std::swap(m[col], m[piv]);
        const Rational pv = m[col][col];
        for (auto& v : m[col]) v /= pv;
        for (std::size_t row = 0; row < 4; ++row) {
            if (row == col || m[row][col].sign() == 0) continue;
            const Rational f = m[row][col];
            for (std::size_t k = col; k < 5; ++k) m[row][k] -= f * m[col][k];
        }
    }
    return {m[0][4], m[1][4], m[2][4], m[3][4]};
}

inline Rational det4(std::array<std::array<Rational, 4>, 4> m)
{
    Rational det = 1;
    for (std::size_t col = 0; col < 4; ++col) {
        std::size_t piv = col;
        while (piv < 4 && m[piv][col].sign() == 0) ++piv;
        if (piv == 4) return 0;
        if (piv != col) {
            std::swap(m[col], m[piv]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t row = col + 1; row < 4; ++row) {
            const Rational f = m[row][col] / m[col][col];
            for (std::size_t k = col; k < 4; ++k) m[row][k] -= f * m[col][k];
        }
    }
    return det;
}

inline std::int64_t to_int64(const Rational& q, const char* what)
{
    if (!q.is_integer() || !q.numerator().fits_slong_p()) throw consistency_error(std::string(what) + ": expected a 64-bit integer");
    return q.numerator().get_si();
}

inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m)
{
    std::int64_t x = 0, y = 0;
    if (ext_gcd(a, m, x, y) != 1) throw consistency_error("inverse_mod: not invertible");
    x %= m;
    return x < 0 ? x + m : x;
}

} // namespace detail

/// Integer coordinates of e in the order basis, or nullopt if e is not in M.
inline std::optional<std::array<std::int64_t, 4>> order_coordinates(const QuaternionOrder& order, const QuatElement& e)
{
    const auto k = detail::solve_coordinates(order.basis, e);
    std::array<std::int64_t, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) {
        if (!k[i].is_integer()) return std::nullopt;
        out[i] = detail::to_int64(k[i], "order_coordinates");
    }
    return out;
}

/// Every product basis[i] * basis[j] lies in the lattice.
inline bool is_closed_under_multiplication(const QuaternionOrder& order)
{
    for (const auto& x : order.basis)
        for (const auto& y : order.basis)
            if (!order_coordinates(order, multiply(order.algebra, x, y))) return false;
    return true;
}

/// The order M = Z[1, a1(1+i)/2, beta(i+1)/2 + (b i + j)/(d0 a1), (-bd - bi - j + ij)/(2 d0)]
/// for the circle a|z|^2 + 2Re(b sqrt(-d) conj z) + c0 = 0, whose unit group
/// of reduced norm 1 is the circle's stabilizer in PSL_2(O_d) under rho'.
inline QuaternionOrder build_order(HermitianCircle circle, std::int64_t d)
{
    require_bianchi_d(d);
    if (circle.a < 0) circle = {-circle.a, -circle.b, -circle.c0};
    if (circle.a == 0) throw domain_error("build_order: circle is a line");
    if (gcd3(circle.a, circle.b, circle.c0) != 1) throw domain_error("build_order: gcd(a, b, c0) must be 1");
    if (circle.a % 2 == 0) throw domain_error("build_order: parity violated (leading coefficient even)");
    const std::int64_t D = circle.discriminant(d);
    if (D <= 0) throw domain_error("build_order: definite algebra (D <= 0)");

    const std::int64_t a = circle.a, b = circle.b, c0 = circle.c0;
    const std::int64_t bd = detail::narrow(static_cast<__int128>(b) * d, "build_order");
    OrderParams prm;
    prm.a = a;
    prm.b = b;
    prm.c0 = c0;
    prm.d0 = gcd3(a, bd, c0);
    const std::int64_t g = std::gcd(a, bd);
    prm.alpha1 = a / g;
    prm.alpha2 = g / std::gcd(g, c0);
    if (prm.alpha1 * prm.alpha2 != a / prm.d0) throw consistency_error("build_order: lattice index differs from a/d0");
    // beta solves bd * beta = -c0 * alpha2 (mod a) in [0, alpha1).
    if (prm.alpha1 == 1) {
        prm.beta = 0;
    } else {
        const __int128 rhs = -static_cast<__int128>(c0) * prm.alpha2;
        if (rhs % g != 0) throw consistency_error("build_order: second column not in lattice");
        const std::int64_t unit = detail::inverse_mod(((bd / g) % prm.alpha1 + prm.alpha1) % prm.alpha1, prm.alpha1);
        __int128 beta = (rhs / g) % prm.alpha1;
        if (beta < 0) beta += prm.alpha1;
        beta = beta * unit % prm.alpha1;
        prm.beta = static_cast<std::int64_t>(beta);
    }
    if ((static_cast<__int128>(bd) * prm.beta + static_cast<__int128>(prm.alpha2) * c0) % a != 0)
        throw consistency_error("build_order: a does not divide b d beta + alpha2 c0");

    QuaternionOrder order;
    order.algebra = {d, D};
    order.params = prm;
    const std::int64_t d0 = prm.d0, a1 = prm.alpha1;
    order.basis[0] = QuatElement::one();
    order.basis[1] = {Rational(a1, 2), Rational(a1, 2), 0, 0};
    order.basis[2] = {Rational(prm.beta, 2), Rational(prm.beta, 2) + Rational(b, d0 * a1), Rational(1, d0 * a1), 0};
    order.basis[3] = {Rational(-bd, 2 * d0), Rational(-b, 2 * d0), Rational(-1, 2 * d0), Rational(1, 2 * d0)};
    if (!is_closed_under_multiplication(order)) throw consistency_error("build_order: lattice is not closed under multiplication");
    return order;
}

/// sqrt |det(trd(e_i conj(e_j)))| over the basis.
inline std::int64_t reduced_discriminant(const QuaternionOrder& order)
{
    std::array<std::array<Rational, 4>, 4> gram;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            gram[i][j] = trd(multiply(order.algebra, order.basis[i], order.basis[j].conj()));
    Rational det = detail::det4(gram);
    if (det.sign() < 0) det = -det;
    if (!det.is_integer()) throw consistency_error("reduced_discriminant: non-integral Gram determinant");
    const BigInt n = det.numerator();
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0) throw consistency_error("reduced_discriminant: determinant is not a square");
    const BigInt root = sqrt(n);
    if (!root.fits_slong_p()) throw consistency_error("reduced_discriminant: overflow");
    return root.get_si();
}

/// dD/d0^2 computed from the parameters alone.
inline std::int64_t discriminant_from_params(std::int64_t d, std::int64_t D, std::int64_t d0)
{
    const __int128 num = static_cast<__int128>(d) * D;
    const __int128 den = static_cast<__int128>(d0) * d0;
    if (d0 <= 0 || num % den != 0) throw domain_error("dD/d0^2 is not an integer");
    return detail::narrow(num / den, "discriminant_from_params");
}

/// Eichler symbol from the local lemmas: (-d/p) + (D/p) at odd p, chi_{-d}(2) at p = 2.
inline int eichler_symbol_closed(std::int64_t d, std::int64_t D, std::int64_t d0, std::uint64_t p)
{
    const std::int64_t disc = discriminant_from_params(d, D, d0);
    if (!is_prime(p) || disc % static_cast<std::int64_t>(p) != 0) throw domain_error("eichler_symbol_closed: p must be a prime dividing dD/d0^2");
    if (p == 2) return CharacterChi(d).at_prime(2);
    const int e = legendre(-d, p) + legendre(D, p);
    if (e < -1 || e > 1) throw consistency_error("eichler_symbol_closed: symbol sum out of range");
    return e;
}

/// [Z_p^x : nrd(M_p^x)]: 2 iff p odd and p | gcd(d/d0, D/d0).
inline int nrd_index(std::int64_t d, std::int64_t D, std::int64_t d0, std::uint64_t p)
{
    const std::int64_t disc = discriminant_from_params(d, D, d0);
    if (!is_prime(p) || disc % static_cast<std::int64_t>(p) != 0) throw domain_error("nrd_index: p must be a prime dividing dD/d0^2");
    if (p == 2) return 1;
    const auto pp = static_cast<std::int64_t>(p);
    if (D % d0 != 0) throw domain_error("nrd_index: d0 must divide D");
    return ((d / d0) % pp == 0 && (D / d0) % pp == 0) ? 2 : 1;
}

/// An integral quadratic form in the four order coordinates:
/// Q(k) = sum_{i <= j} coef[i][j] k_i k_j.
struct CoordinateQuadraticForm {
    std::array<std::array<std::int64_t, 4>, 4> coef{};

    std::int64_t eval_mod(const std::array<std::int64_t, 4>& k, std::int64_t modulus) const
    {
        __int128 acc = 0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i; j < 4; ++j) acc += static_cast<__int128>(coef[i][j] % modulus) * k[i] * k[j];
        auto r = static_cast<std::int64_t>(acc % modulus);
        return r < 0 ? r + modulus : r;
    }
};

/// Expresses f(sum k_i e_i) as an integral quadratic form; throws if f is
/// not integral on the lattice.
inline CoordinateQuadraticForm coordinate_form(const QuaternionOrder& order,
                                               const std::function<Rational(const QuatElement&)>& f)
{
    CoordinateQuadraticForm q;
    std::array<Rational, 4> diag;
    for (std::size_t i = 0; i < 4; ++i) {
        diag[i] = f(order.basis[i]);
        q.coef[i][i] = detail::to_int64(diag[i], "coordinate_form");
    }
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            q.coef[i][j] = detail::to_int64(f(order.basis[i] + order.basis[j]) - diag[i] - diag[j], "coordinate_form");
    return q;
}

namespace detail {

// Visits one representative of each line through the origin of (Z/p)^4:
// vectors whose first nonzero coordinate is 1.
template <class Visit>
void for_each_projective_point(std::int64_t p, Visit&& visit)
{
    std::array<std::int64_t, 4> k{};
    for (std::size_t lead = 0; lead < 4; ++lead) {
        const std::size_t free = 3 - lead;
        std::int64_t count = 1;
        for (std::size_t i = 0; i < free; ++i) count *= p;
        for (std::int64_t idx = 0; idx < count; ++idx) {
            k.fill(0);
            k[lead] = 1;
            std::int64_t rest = idx;
            for (std::size_t i = lead + 1; i < 4; ++i) {
                k[i] = rest % p;
                rest /= p;
            }
            if (!visit(k)) return;
        }
    }
}

inline std::vector<int> residue_symbol_table(std::int64_t p)
{
    std::vector<int> table(static_cast<std::size_t>(p), -1);
    table[0] = 0;
    for (std::int64_t x = 1; x < p; ++x) table[static_cast<std::size_t>(x * x % p)] = 1;
    return table;
}

inline void require_prime_of_discriminant(const QuaternionOrder& order, std::uint64_t p, const char* what)
{
    if (!is_prime(p) || reduced_discriminant(order) % static_cast<std::int64_t>(p) != 0)
        throw domain_error(std::string(what) + ": p must be a prime dividing the reduced discriminant");
}

inline int symbol_from_value_set(bool seen_plus, bool seen_minus)
{
    if (seen_plus && seen_minus) throw consistency_error("eichler symbol: value set {0, 1, -1} is not residually determined");
    return seen_plus ? 1 : (seen_minus ? -1 : 0);
}

} // namespace detail

/// Eichler symbol read off the value set of (Delta(alpha)/p) over M/pM
/// (Kronecker symbol of Delta mod 8 over M/8M when p = 2): the set is
/// {0, e} and the symbol is e ({0} alone gives 0).
///
/// At odd p, Delta(lambda alpha) = lambda^2 Delta(alpha), so one point per
/// line of M/pM already realizes every symbol value.
inline int eichler_symbol_bruteforce(const QuaternionOrder& order, std::uint64_t p)
{
    detail::require_prime_of_discriminant(order, p, "eichler_symbol_bruteforce");
    const QuaternionAlgebra alg = order.algebra;
    const auto form = coordinate_form(order, [&](const QuatElement& e) { return disc_form(alg, e); });
    bool plus = false, minus = false;
    if (p == 2) {
        std::array<std::int64_t, 4> k{};
        for (k[0] = 0; k[0] < 8; ++k[0])
            for (k[1] = 0; k[1] < 8; ++k[1])
                for (k[2] = 0; k[2] < 8; ++k[2])
                    for (k[3] = 0; k[3] < 8; ++k[3]) {
                        const int s = kronecker_at_2(form.eval_mod(k, 8));
                        plus |= s > 0;
                        minus |= s < 0;
                    }
        return detail::symbol_from_value_set(plus, minus);
    }
    const auto pp = static_cast<std::int64_t>(p);
    const auto table = detail::residue_symbol_table(pp);
    detail::for_each_projective_point(pp, [&](const std::array<std::int64_t, 4>& k) {
        const int s = table[static_cast<std::size_t>(form.eval_mod(k, pp))];
        plus |= s > 0;
        minus |= s < 0;
        return !(plus && minus);
    });
    return detail::symbol_from_value_set(plus, minus);
}

/// Unit residues {nrd(alpha) mod p : alpha in M/pM, p does not divide nrd(alpha)} at odd p.
inline std::set<std::int64_t> unit_norm_residues(const QuaternionOrder& order, std::uint64_t p)
{
    if (p == 2 || !is_prime(p)) throw domain_error("unit_norm_residues: p must be an odd prime");
    const QuaternionAlgebra alg = order.algebra;
    const auto form = coordinate_form(order, [&](const QuatElement& e) { return nrd(alg, e); });
    const auto pp = static_cast<std::int64_t>(p);
    bool square = false, non_square = false;
    const auto table = detail::residue_symbol_table(pp);
    detail::for_each_projective_point(pp, [&](const std::array<std::int64_t, 4>& k) {
        const int s = table[static_cast<std::size_t>(form.eval_mod(k, pp))];
        square |= s > 0;
        non_square |= s < 0;
        return !(square && non_square);
    });
    // nrd(lambda alpha) = lambda^2 nrd(alpha): each class hit is hit entirely.
    std::set<std::int64_t> out;
    for (std::int64_t x = 1; x < pp; ++x) {
        const int s = table[static_cast<std::size_t>(x)];
        if ((s > 0 && square) || (s < 0 && non_square)) out.insert(x);
    }
    return out;
}

/// [Z_p^x : nrd(M_p^x)] by enumeration at odd p; the index at p = 2 is 1.
inline int nrd_index_bruteforce(const QuaternionOrder& order, std::uint64_t p)
{
    if (p == 2) return 1;
    const auto units = unit_norm_residues(order, p);
    if (units.size() == p - 1) return 1;
    if (units.size() == (p - 1) / 2) return 2;
    throw consistency_error("nrd_index_bruteforce: norm residues are neither all units nor the squares");
}

/// rho(t + xi + yj + zij) = [[t + x w, D(y + z w)], [y - z w, t - x w]], w = sqrt(-d).
inline Mat2 rho(const QuaternionAlgebra& alg, const QuatElement& e)
{
    const std::int64_t d = alg.d;
    const Rational big_d(alg.D);
    return {{QuadNumber(d, e.t, e.x), QuadNumber(d, big_d * e.y, big_d * e.z), QuadNumber(d, e.y, -e.z),
             QuadNumber(d, e.t, -e.x)}};
}

/// T^{-1} rho(e) T with T = [[a, b sqrt(-d)], [0, 1]].
inline Mat2 rho_prime(const QuaternionOrder& order, const QuatElement& e)
{
    const std::int64_t d = order.algebra.d;
    const Mat2 t{{QuadNumber(d, order.params.a), QuadNumber(d, 0, order.params.b), QuadNumber(d, 0), QuadNumber(d, 1)}};
    return t.inverse() * rho(order.algebra, e) * t;
}

/// Hermitian matrix of the circle the order was built from.
inline Mat2 order_circle_matrix(const QuaternionOrder& order)
{
    return HermitianCircle{order.params.a, order.params.b, order.params.c0}.matrix(order.algebra.d);
}

/// Elements of reduced norm 1 other than +-1 with order coordinates in
/// [-bound, bound], at most `limit` of them.
inline std::vector<QuatElement> find_norm_one_elements(const QuaternionOrder& order, std::int64_t bound, std::size_t limit)
{
    const QuaternionAlgebra alg = order.algebra;
    const auto form = coordinate_form(order, [&](const QuatElement& e) { return nrd(alg, e); });
    std::vector<QuatElement> out;
    std::array<std::int64_t, 4> k{};
    for (k[1] = -bound; k[1] <= bound; ++k[1])
        for (k[2] = -bound; k[2] <= bound; ++k[2])
            for (k[3] = -bound; k[3] <= bound; ++k[3]) {
                if (k[1] == 0 && k[2] == 0 && k[3] == 0) continue;
                for (k[0] = -bound; k[0] <= bound; ++k[0]) {
                    __int128 acc = 0;
                    for (std::size_t i = 0; i < 4; ++i)
                        for (std::size_t j = i; j < 4; ++j) acc += static_cast<__int128>(form.coef[i][j]) * k[i] * k[j];
                    if (acc != 1) continue;
                    out.push_back(order.element(k));
                    if (out.size() >= limit) return out;
                }
            }
    return out;
}

} // namespace tgsurf
