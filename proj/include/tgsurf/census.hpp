#pragma once

// Surface census: all S_{m,c,r} of area below X, the counting function
// xi(X), the counting-lemma enumeration and fit reports against the
// leading constant.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "tgsurf/classgroup.hpp"
#include "tgsurf/error.hpp"
#include "tgsurf/euler.hpp"
#include "tgsurf/hermitian.hpp"
#include "tgsurf/ntkernel.hpp"
#include "tgsurf/volume.hpp"

namespace tgsurf {

// ---------------------------------------------------------------------------
// Counting lemma

/// F(n) = n prod_{p | n} (1 + chi(p)/p).
inline Rational F_value(std::int64_t d, std::int64_t n)
{
    if (n < 1) throw domain_error("F_value: n must be positive");
    const CharacterChi chi(d);
    Rational f(n);
    for (const auto& [p, e] : factorize(static_cast<std::uint64_t>(n)).factors) {
        const auto pp = static_cast<std::int64_t>(p);
        f *= Rational(pp + chi.at_prime(p), pp);
    }
    return f;
}

namespace detail {

/// First primes and primorials up to 2^62.
struct PrimorialTable {
    std::vector<std::uint64_t> primes;     // p_1 = 2, p_2 = 3, ...
    std::vector<std::uint64_t> primorials; // P_0 = 1, P_k = p_1 ... p_k
    std::vector<Rational> mertens;         // B_k = prod_{i <= k} (1 - 1/p_i)

    PrimorialTable()
    {
        primorials.push_back(1);
        mertens.emplace_back(1);
        for (std::uint64_t p = 2; primorials.back() <= (std::uint64_t{1} << 62) / p; ++p) {
            if (!is_prime(p)) continue;
            primes.push_back(p);
            primorials.push_back(primorials.back() * p);
            mertens.push_back(mertens.back() * Rational(static_cast<std::int64_t>(p - 1), static_cast<std::int64_t>(p)));
        }
    }
};

inline const PrimorialTable& primorial_table()
{
    static const PrimorialTable t;
    return t;
}

} // namespace detail

/// Monotone non-decreasing lower bound for phi(n), n >= 1:
/// with P_k <= n < P_{k+1}, E(n) = B_k min(n, P_{k+1} - P_k).
/// phi(n) >= n B_{omega(n)} >= n B_k, and the min makes E continuous at primorials.
inline Rational phi_envelope(std::uint64_t n)
{
    const auto& t = detail::primorial_table();
    std::size_t k = 0;
    while (k + 1 < t.primorials.size() && t.primorials[k + 1] <= n) ++k;
    std::uint64_t capped = n;
    if (k + 1 < t.primorials.size()) capped = std::min(n, t.primorials[k + 1] - t.primorials[k]);
    return t.mertens[k] * Rational(BigInt(static_cast<unsigned long>(capped)));
}

/// #{n >= 1 : n = r mod a, F(n) < X}. Every prime of a must divide d.
/// F(n) >= phi(n) >= phi_envelope(n), so n runs up to the first point where the
/// envelope reaches X; F is sieved over that range in exact integers.
inline std::uint64_t count_F_in_progression(std::int64_t d, std::int64_t a, std::int64_t r, const Rational& X)
{
    const CharacterChi chi(d);
    if (a < 1) throw domain_error("count_F_in_progression: a must be positive");
    if (d % static_cast<std::int64_t>(radical(static_cast<std::uint64_t>(a))) != 0)
        throw domain_error("count_F_in_progression: every prime of a must divide d");
    if (X.sign() <= 0) throw domain_error("count_F_in_progression: X must be positive");

    constexpr std::uint64_t kMaxRange = 200'000'000;
    std::uint64_t lo = 1, hi = 2;
    while (phi_envelope(hi) < X) {
        hi *= 2;
        if (hi > kMaxRange) throw domain_error("count_F_in_progression: X too large for the sieve");
    }
    while (lo < hi) { // first n with envelope >= X
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (phi_envelope(mid) < X)
            lo = mid + 1;
        else
            hi = mid;
    }
    const std::uint64_t N = lo;

    // F(n) < X  <=>  F(n) <= ceil(X) - 1 for integer F(n).
    BigInt ceil_x;
    mpz_cdiv_q(ceil_x.get_mpz_t(), X.numerator().get_mpz_t(), X.denominator().get_mpz_t());
    const BigInt limit = ceil_x - 1;

    std::vector<std::uint32_t> F(N + 1);
    for (std::uint64_t n = 0; n <= N; ++n) F[n] = static_cast<std::uint32_t>(n);
    std::vector<bool> composite(N + 1, false);
    for (std::uint64_t p = 2; p <= N; ++p) {
        if (composite[p]) continue;
        const auto num = static_cast<std::uint32_t>(static_cast<std::int64_t>(p) + chi.at_prime(p));
        for (std::uint64_t k = p; k <= N; k += p) {
            if (k > p) composite[k] = true;
            F[k] = F[k] / static_cast<std::uint32_t>(p) * num;
        }
    }
    const auto r0 = static_cast<std::uint64_t>(mod_floor(r, static_cast<std::uint64_t>(a)));
    std::uint64_t count = 0;
    for (std::uint64_t n = r0 == 0 ? static_cast<std::uint64_t>(a) : r0; n <= N; n += static_cast<std::uint64_t>(a))
        if (limit >= static_cast<unsigned long>(F[n])) ++count;
    return count;
}

// ---------------------------------------------------------------------------
// Surfaces

struct SurfaceRecord {
    std::int64_t m = 0;
    std::int64_t c = 0;
    std::int64_t r = 1;
    std::int64_t d0 = 1;
    std::int64_t D = 1;
    Rational q; // area / pi

    friend bool operator==(const SurfaceRecord&, const SurfaceRecord&) = default;
};

struct CensusOptions {
    /// One record per r; otherwise one record per (m, c) carrying r = 1.
    bool materialize_r = true;
    /// The c-scan stops once the area lower bound exceeds slack * X.
    std::int64_t bound_slack = 1;
    /// Worker threads; 0 means hardware concurrency.
    unsigned jobs = 1;
};

struct CensusResult {
    std::int64_t d = 0;
    std::vector<SurfaceRecord> records;
    std::uint64_t pair_count = 0;  // (m, c) with area < X
    std::int64_t r_multiplicity = 1; // tau(d)/2
    std::uint64_t scanned = 0;     // candidates whose area was evaluated

    std::uint64_t xi() const { return pair_count * static_cast<std::uint64_t>(r_multiplicity); }
};

/// Divisors r of d with r^2 < d.
inline std::vector<std::int64_t> coset_divisors(std::int64_t d)
{
    std::vector<std::int64_t> out;
    for (std::uint64_t r : divisor_stats(static_cast<std::uint64_t>(d)).divisors)
        if (static_cast<std::int64_t>(r * r) < d) out.push_back(static_cast<std::int64_t>(r));
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

/// Lower bound K_m on q / phi_envelope(D) for fixed m, with g = (m, d):
/// q >= (d/d0^2)(1/3) 2^{-omega(g)} prod_{p | g}(1 - 1/p) * phi(D).
inline Rational census_lower_factor(std::int64_t d, std::int64_t m)
{
    const std::int64_t g = gcd_md(m, d);
    const std::int64_t d0 = d / g;
    Rational k(d, 3 * d0 * d0);
    for (const auto& [p, e] : factorize(static_cast<std::uint64_t>(g)).factors) {
        const auto pp = static_cast<std::int64_t>(p);
        k *= Rational(pp - 1, 2 * pp);
    }
    return k;
}

struct PairHit {
    std::int64_t m, c, d0, D;
    Rational q;
};

inline void scan_m(std::int64_t d, std::int64_t m, const ThresholdComparator& below, const ThresholdComparator& stop,
                   std::vector<PairHit>& hits, std::uint64_t& scanned)
{
    const Rational k = census_lower_factor(d, m);
    std::int64_t c = floor_div(m * m - 1, d);
    for (;; --c) {
        const auto [d0, D] = d0_and_D(d, m, c);
        if (stop.compare(k * phi_envelope(static_cast<std::uint64_t>(D))) == std::strong_ordering::greater) break;
        const ExactArea area = area_closed_form({d, m, c, 1});
        ++scanned;
        if (below.less(area.q)) hits.push_back({m, c, d0, D, area.q});
    }
}

} // namespace detail

/// All (m, c, r) with area < X, sorted by (q, m, c, r).
inline CensusResult enumerate_surfaces(std::int64_t d, const Rational& X, const CensusOptions& opt = {})
{
    require_admissible(d);
    if (X.sign() <= 0) throw domain_error("X must be positive");
    if (opt.bound_slack < 1) throw domain_error("bound slack must be >= 1");

    const ThresholdComparator below(X);
    const ThresholdComparator stop(X * Rational(opt.bound_slack));
    unsigned jobs = opt.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opt.jobs;
    jobs = static_cast<unsigned>(std::min<std::int64_t>(jobs, d));

    std::vector<std::vector<detail::PairHit>> hits(jobs);
    std::vector<std::uint64_t> scanned(jobs, 0);
    std::vector<std::exception_ptr> failures(jobs);
    auto work = [&](unsigned w) {
        try {
            const ThresholdComparator b(below), s(stop);
            for (std::int64_t m = w; m < d; m += jobs) detail::scan_m(d, m, b, s, hits[w], scanned[w]);
        } catch (...) {
            failures[w] = std::current_exception();
        }
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);

    CensusResult out;
    out.d = d;
    const auto rs = coset_divisors(d);
    out.r_multiplicity = static_cast<std::int64_t>(rs.size());
    for (unsigned w = 0; w < jobs; ++w) {
        out.scanned += scanned[w];
        out.pair_count += hits[w].size();
        for (const auto& h : hits[w]) {
            if (opt.materialize_r) {
                for (std::int64_t r : rs) out.records.push_back({h.m, h.c, r, h.d0, h.D, h.q});
            } else {
                out.records.push_back({h.m, h.c, 1, h.d0, h.D, h.q});
            }
        }
    }
    std::sort(out.records.begin(), out.records.end(), [](const SurfaceRecord& a, const SurfaceRecord& b) {
        if (a.q != b.q) return a.q < b.q;
        return std::tie(a.m, a.c, a.r) < std::tie(b.m, b.c, b.r);
    });
    return out;
}

inline std::uint64_t xi(std::int64_t d, const Rational& X, unsigned jobs = 1)
{
    CensusOptions opt;
    opt.materialize_r = false;
    opt.jobs = jobs;
    return enumerate_surfaces(d, X, opt).xi();
}

inline std::uint64_t xi(std::int64_t d, std::string_view X_decimal, unsigned jobs = 1)
{
    return xi(d, Rational::from_decimal(X_decimal), jobs);
}

// ---------------------------------------------------------------------------
// Fit report

struct FitRow {
    Rational X;
    std::uint64_t xi = 0;
    long double ratio = 0;     // xi / X
    long double L_main = 0;
    long double deviation = 0; // |xi/X - L| / L
};

/// One census at the largest X, then counts for every X in the list.
inline std::vector<FitRow> fit_report(std::int64_t d, const std::vector<Rational>& X_list, unsigned jobs = 1)
{
    if (X_list.empty()) return {};
    for (std::size_t i = 1; i < X_list.size(); ++i)
        if (!(X_list[i - 1] < X_list[i])) throw domain_error("fit_report: X values must be ascending");
    require_admissible(d);
    const ConstantReport constant = leading_constant_at(d, 1'000'000);

    CensusOptions opt;
    opt.materialize_r = false;
    opt.jobs = jobs;
    const CensusResult census = enumerate_surfaces(d, X_list.back(), opt);
    std::vector<FitRow> rows;
    for (const Rational& X : X_list) {
        const ThresholdComparator cmp(X);
        const auto it = std::partition_point(census.records.begin(), census.records.end(),
                                             [&](const SurfaceRecord& s) { return cmp.less(s.q); });
        FitRow row;
        row.X = X;
        row.xi = static_cast<std::uint64_t>(it - census.records.begin()) * static_cast<std::uint64_t>(census.r_multiplicity);
        row.ratio = static_cast<long double>(row.xi) / static_cast<long double>(X.to_double());
        row.L_main = constant.L_main.value;
        row.deviation = std::fabs(row.ratio - row.L_main) / row.L_main;
        rows.push_back(row);
    }
    return rows;
}

} // namespace tgsurf
