#pragma once

// Euler products for the asymptotic constants:
//   C      = prod_p (1 - 1/p + 1/(p + chi(p)))
//   L_main = K pi prod_p (1 - (chi(p)^2 + chi(p))/p^2 + 1/p^3),  K = tau(d)/4 (5/12 for d = 4)
//   L_census_form = (6K/pi) C prod_{p | d} (1 + 1/(p(p-1)))
//
// Products run over p <= P exactly (in long double); the tail over p > P is
// rewritten through L(2, chi) and zeta(2) = pi^2/6:
//   prod_{p>P} (1 - chi(p)/p^2) = 1 / (L(2, chi) prod_{p<=P} (1 - chi(p)/p^2)),
// and what is left of each tail factor is 1 + O(p^-3), whose product over
// p > P is bounded by exp(+-1.1/P^2).

#include <cfloat>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "tgsurf/classgroup.hpp"
#include "tgsurf/error.hpp"
#include "tgsurf/ntkernel.hpp"

namespace tgsurf {

/// value +- error.
struct Certified {
    long double value = 0;
    long double error = 0;

    bool overlaps(const Certified& o) const { return std::fabs(value - o.value) <= error + o.error; }
};

namespace detail {

inline constexpr long double kPi = std::numbers::pi_v<long double>;

inline std::int64_t character_modulus(const CharacterChi& chi) { return chi.d() == 4 ? 4 : chi.d(); }

/// chi over one period [0, q).
inline std::vector<int> character_period(const CharacterChi& chi)
{
    const std::int64_t q = character_modulus(chi);
    std::vector<int> table(static_cast<std::size_t>(q), 0);
    for (std::int64_t a = 1; a < q; ++a) table[static_cast<std::size_t>(a)] = chi(static_cast<std::uint64_t>(a));
    return table;
}

/// Relative error bound for a product of n long double factors.
inline long double product_rounding(std::size_t n) { return 4.0L * static_cast<long double>(n + 1) * LDBL_EPSILON; }

/// Log-bound for prod_{p>P} (1 + O(p^-3)) tails.
inline long double cubic_tail_bound(std::uint32_t P) { return 1.1L / (static_cast<long double>(P) * P); }

inline void require_truncation(std::uint32_t P, std::int64_t d)
{
    if (P < 1000 || static_cast<std::int64_t>(P) <= d) throw domain_error("truncation prime must be >= 1000 and exceed d");
}

} // namespace detail

/// L(2, chi_{-d}) = sum chi(n)/n^2, summed to N (a multiple of the modulus, so
/// the character sum S(N) vanishes); Abel summation bounds the rest by
/// max|S| / (N+1)^2.
inline Certified dirichlet_l_at_2(const CharacterChi& chi, std::uint64_t terms = 10'000'000)
{
    const auto table = detail::character_period(chi);
    const auto q = static_cast<std::uint64_t>(table.size());
    const std::uint64_t n_max = ((terms + q - 1) / q) * q;
    long double max_partial = 0, partial = 0;
    for (int v : table) {
        partial += v;
        max_partial = std::max(max_partial, std::fabs(partial));
    }
    long double sum = 0, comp = 0, abs_sum = 0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        const int v = table[n % q];
        if (v == 0) continue;
        const long double nn = static_cast<long double>(n);
        const long double term = static_cast<long double>(v) / (nn * nn);
        abs_sum += std::fabs(term);
        // Kahan
        const long double y = term - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    const long double n1 = static_cast<long double>(n_max + 1);
    return {sum, max_partial / (n1 * n1) + 4.0L * LDBL_EPSILON * abs_sum};
}

struct EulerProduct {
    Certified value;
    std::uint32_t truncation_prime = 0;
    long double tail_bound = 0; // bound on |log| of the neglected cubic tail
};

/// C = prod_p (1 - 1/p + 1/(p + chi(p))) truncated at P with the tail through L(2, chi).
inline EulerProduct constant_C_at(std::int64_t d, std::uint32_t P)
{
    const CharacterChi chi(d);
    detail::require_truncation(P, d);
    const auto primes = primes_up_to(P);
    long double head = 1, l_head = 1;
    for (std::uint32_t p : primes) {
        const long double pl = p;
        const int x = chi.at_prime(p);
        head *= 1.0L - 1.0L / pl + 1.0L / (pl + x);
        l_head *= 1.0L - x / (pl * pl);
    }
    const Certified l2 = dirichlet_l_at_2(chi);
    EulerProduct out;
    out.truncation_prime = P;
    out.tail_bound = detail::cubic_tail_bound(P);
    out.value.value = head / (l2.value * l_head);
    const long double rel = out.tail_bound + l2.error / l2.value + detail::product_rounding(2 * primes.size());
    out.value.error = std::fabs(out.value.value) * (std::expm1(rel));
    return out;
}

/// Smallest truncation prime whose certified error reaches 10^-digits (digits <= 15).
inline std::uint32_t truncation_for_digits(int digits)
{
    if (digits < 1 || digits > 15) throw domain_error("precision must be between 1 and 15 digits");
    const long double target = std::pow(10.0L, -digits) / 2;
    const auto P = static_cast<std::uint64_t>(std::ceil(std::sqrt(1.1L / target)));
    return static_cast<std::uint32_t>(std::max<std::uint64_t>(P, 1000));
}

inline EulerProduct constant_C(std::int64_t d, int digits) { return constant_C_at(d, truncation_for_digits(digits)); }

struct ConstantReport {
    std::int64_t d = 0;
    Certified L_main;
    Certified L_census_form;
    std::uint32_t truncation_prime = 0;
    long double tail_bound = 0;

    bool consistent() const { return L_main.overlaps(L_census_form); }
};

/// K in L_main = K pi prod_p(...): tau(d)/4, or 5/12 for d = 4.
inline long double leading_prefactor(std::int64_t d)
{
    if (d == 4) return 5.0L / 12.0L;
    return static_cast<long double>(divisor_stats(static_cast<std::uint64_t>(d)).tau) / 4.0L;
}

/// Both forms of the leading constant of xi(X) ~ L X, truncated at P.
/// d must be admissible or 4.
inline ConstantReport leading_constant_at(std::int64_t d, std::uint32_t P)
{
    if (d != 4) require_admissible(d);
    const CharacterChi chi(d);
    detail::require_truncation(P, d);
    const auto primes = primes_up_to(P);
    long double main_head = 1, l_head = 1, zeta_head = 1;
    for (std::uint32_t p : primes) {
        const long double pl = p;
        const int x = chi.at_prime(p);
        main_head *= 1.0L - (x * x + x) / (pl * pl) + 1.0L / (pl * pl * pl);
        l_head *= 1.0L - x / (pl * pl);
        zeta_head *= 1.0L - 1.0L / (pl * pl);
    }
    const Certified l2 = dirichlet_l_at_2(chi);
    const long double zeta2 = detail::kPi * detail::kPi / 6.0L;
    const long double K = leading_prefactor(d);

    ConstantReport rep;
    rep.d = d;
    rep.truncation_prime = P;
    rep.tail_bound = detail::cubic_tail_bound(P);

    // For p > P > d: chi(p)^2 = 1 and f_p = (1 - chi/p^2)(1 - 1/p^2)(1 + O(p^-3)).
    const long double main_value = K * detail::kPi * main_head / (l2.value * l_head * zeta2 * zeta_head);
    const long double main_rel = rep.tail_bound + l2.error / l2.value + detail::product_rounding(3 * primes.size());
    rep.L_main = {main_value, main_value * std::expm1(main_rel)};

    const EulerProduct c = constant_C_at(d, P);
    long double local = 1;
    for (const auto& [p, e] : factorize(static_cast<std::uint64_t>(d)).factors) {
        const long double pl = static_cast<long double>(p);
        local *= 1.0L + 1.0L / (pl * (pl - 1.0L));
    }
    const long double census_value = 6.0L * K / detail::kPi * c.value.value * local;
    rep.L_census_form = {census_value, census_value * (c.value.error / c.value.value + detail::product_rounding(4))};
    return rep;
}

inline ConstantReport leading_constant(std::int64_t d, int digits) { return leading_constant_at(d, truncation_for_digits(digits)); }

struct ResidueCheck {
    Certified product;   // prod_p (1 - psi0(p)/p + psi0(p)/(p (1 + chi(p)/p))) prod_{p | a} (1 - 1/p)
    Certified phi_c_over_a; // phi(a) C / a

    bool agrees() const { return product.overlaps(phi_c_over_a); }
};

/// Residue at s = 1 of D_F(s, psi_0)/zeta(s) for the principal character mod a,
/// evaluated from its Euler product and compared with phi(a) C / a.
inline ResidueCheck residue_constant_check(std::int64_t d, std::int64_t a, std::uint32_t P = 1'000'000)
{
    if (a < 1) throw domain_error("residue_constant_check: a must be positive");
    if (d % static_cast<std::int64_t>(radical(static_cast<std::uint64_t>(a))) != 0)
        throw domain_error("residue_constant_check: every prime of a must divide d");
    const CharacterChi chi(d);
    detail::require_truncation(P, std::max(d, a));
    const auto primes = primes_up_to(P);
    long double head = 1, l_head = 1;
    for (std::uint32_t p : primes) {
        const long double pl = p;
        const int x = chi.at_prime(p);
        const long double psi0 = (a % static_cast<std::int64_t>(p) == 0) ? 0.0L : 1.0L;
        head *= 1.0L - psi0 / pl + psi0 / (pl * (1.0L + x / pl));
        l_head *= 1.0L - x / (pl * pl);
    }
    for (const auto& [p, e] : factorize(static_cast<std::uint64_t>(a)).factors) head *= 1.0L - 1.0L / static_cast<long double>(p);
    const Certified l2 = dirichlet_l_at_2(chi);
    ResidueCheck out;
    const long double value = head / (l2.value * l_head);
    const long double rel = detail::cubic_tail_bound(P) + l2.error / l2.value + detail::product_rounding(2 * primes.size() + 8);
    out.product = {value, value * std::expm1(rel)};

    const EulerProduct c = constant_C_at(d, P);
    const long double ratio = static_cast<long double>(totient(static_cast<std::uint64_t>(a))) / static_cast<long double>(a);
    out.phi_c_over_a = {ratio * c.value.value, ratio * c.value.error + ratio * c.value.value * detail::product_rounding(2)};
    return out;
}

} // namespace tgsurf
