#pragma once

// Oracle-equivalence and invariant suites behind `tgsurf verify`.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tgsurf/census.hpp"
#include "tgsurf/classgroup.hpp"
#include "tgsurf/euler.hpp"
#include "tgsurf/hermitian.hpp"
#include "tgsurf/quatorder.hpp"
#include "tgsurf/volume.hpp"

namespace tgsurf {

struct SuiteResult {
    std::string name;
    bool passed = true;
    std::uint64_t checked = 0;
    std::string counterexample; // first failure
};

inline const std::vector<std::int64_t>& reference_ds()
{
    static const std::vector<std::int64_t> ds{3, 7, 11, 15, 19, 23};
    return ds;
}

/// Every (m, c, r) for d with D <= D_max, ordered by (m, c descending, r).
inline std::vector<SurfaceIndex> surfaces_up_to_D(std::int64_t d, std::int64_t D_max)
{
    std::vector<SurfaceIndex> out;
    const auto rs = coset_divisors(d);
    for (std::int64_t m = 0; m < d; ++m)
        for (std::int64_t c = floor_div(m * m - 1, d);; --c) {
            if (d0_and_D(d, m, c).D > D_max) break;
            for (std::int64_t r : rs) out.push_back({d, m, c, r});
        }
    return out;
}

inline std::string describe(const SurfaceIndex& s)
{
    return "(d,m,c,r)=(" + std::to_string(s.d) + "," + std::to_string(s.m) + "," + std::to_string(s.c) + "," +
           std::to_string(s.r) + ")";
}

namespace detail {

/// Runs `check` on each surface; a returned string is a failure description.
inline SuiteResult run_over_surfaces(std::string name, const std::vector<std::int64_t>& ds, std::int64_t D_max,
                                     const std::function<std::optional<std::string>(const SurfaceIndex&)>& check)
{
    SuiteResult res{std::move(name), true, 0, {}};
    for (std::int64_t d : ds)
        for (const SurfaceIndex& s : surfaces_up_to_D(d, D_max)) {
            ++res.checked;
            std::optional<std::string> failure;
            try {
                failure = check(s);
            } catch (const std::exception& e) {
                failure = std::string("exception: ") + e.what();
            }
            if (failure) {
                res.passed = false;
                res.counterexample = describe(s) + ": " + *failure;
                return res;
            }
        }
    return res;
}

inline std::vector<std::uint64_t> primes_of_reduced_disc(const SurfaceIndex& s)
{
    const auto [d0, D] = d0_and_D(s.d, s.m, s.c);
    return factorize(static_cast<std::uint64_t>(discriminant_from_params(s.d, D, d0))).primes();
}

} // namespace detail

inline SuiteResult verify_gcd_identity_suite(const std::vector<std::int64_t>& ds = reference_ds(), std::int64_t D_max = 200)
{
    return detail::run_over_surfaces("gcd identities", ds, D_max, [](const SurfaceIndex& s) -> std::optional<std::string> {
        if (!verify_gcd_identities(s)) return "gcd(a',b',c') != 1 or gcd(a',d,c') != d0";
        return std::nullopt;
    });
}

inline SuiteResult verify_reduced_discriminant_suite(const std::vector<std::int64_t>& ds = reference_ds(),
                                                     std::int64_t D_max = 200)
{
    return detail::run_over_surfaces("reduced discriminant", ds, D_max, [](const SurfaceIndex& s) -> std::optional<std::string> {
        const auto [d0, D] = d0_and_D(s.d, s.m, s.c);
        const QuaternionOrder order = build_order(pullback_circle(s), s.d);
        const std::int64_t got = reduced_discriminant(order), want = discriminant_from_params(s.d, D, d0);
        if (got != want) return "trace form gives " + std::to_string(got) + ", dD/d0^2 = " + std::to_string(want);
        return std::nullopt;
    });
}

inline SuiteResult verify_eichler_suite(const std::vector<std::int64_t>& ds = reference_ds(), std::int64_t D_max = 200)
{
    return detail::run_over_surfaces("eichler symbols", ds, D_max, [](const SurfaceIndex& s) -> std::optional<std::string> {
        const auto [d0, D] = d0_and_D(s.d, s.m, s.c);
        const QuaternionOrder order = build_order(pullback_circle(s), s.d);
        for (std::uint64_t p : detail::primes_of_reduced_disc(s)) {
            const int closed = eichler_symbol_closed(s.d, D, d0, p), brute = eichler_symbol_bruteforce(order, p);
            if (closed != brute)
                return "p=" + std::to_string(p) + ": closed " + std::to_string(closed) + ", enumeration " + std::to_string(brute);
        }
        return std::nullopt;
    });
}

inline SuiteResult verify_norm_index_suite(const std::vector<std::int64_t>& ds = reference_ds(), std::int64_t D_max = 200)
{
    return detail::run_over_surfaces("norm indices", ds, D_max, [](const SurfaceIndex& s) -> std::optional<std::string> {
        const auto [d0, D] = d0_and_D(s.d, s.m, s.c);
        const QuaternionOrder order = build_order(pullback_circle(s), s.d);
        for (std::uint64_t p : detail::primes_of_reduced_disc(s)) {
            if (p == 2) continue;
            const int closed = nrd_index(s.d, D, d0, p), brute = nrd_index_bruteforce(order, p);
            if (closed != brute)
                return "p=" + std::to_string(p) + ": closed " + std::to_string(closed) + ", enumeration " + std::to_string(brute);
        }
        return std::nullopt;
    });
}

inline SuiteResult verify_area_suite(const std::vector<std::int64_t>& ds = reference_ds(), std::int64_t D_max = 200)
{
    return detail::run_over_surfaces("area pipelines", ds, D_max, [](const SurfaceIndex& s) -> std::optional<std::string> {
        const ExactArea closed = area_closed_form(s), via_order = area_via_order(s);
        if (!(closed == via_order)) return "closed form " + closed.q.str() + ", order " + via_order.q.str();
        if (closed.q.sign() <= 0) return "non-positive area";
        return std::nullopt;
    });
}

inline SuiteResult verify_constant_chain_suite(const std::vector<std::int64_t>& ds = reference_ds(),
                                               long double tolerance = 1e-9L)
{
    SuiteResult res{"constant chain", true, 0, {}};
    for (std::int64_t d : ds) {
        ++res.checked;
        const ConstantReport rep = leading_constant_at(d, 1'000'000);
        const long double diff = std::fabs(rep.L_main.value - rep.L_census_form.value);
        if (!rep.consistent() || !(diff < tolerance)) {
            std::ostringstream os;
            os.precision(18);
            os << "d=" << d << ": L_main=" << rep.L_main.value << " L_census_form=" << rep.L_census_form.value << " diff=" << diff;
            res.passed = false;
            res.counterexample = os.str();
            return res;
        }
    }
    return res;
}

inline SuiteResult verify_residue_suite()
{
    SuiteResult res{"residue constants", true, 0, {}};
    for (const auto& [d, a] : std::vector<std::pair<std::int64_t, std::int64_t>>{{3, 1}, {3, 3}, {15, 15}}) {
        ++res.checked;
        const ResidueCheck rc = residue_constant_check(d, a);
        if (!rc.agrees()) {
            std::ostringstream os;
            os.precision(18);
            os << "(d,a)=(" << d << "," << a << "): product " << rc.product.value << ", phi(a)C/a " << rc.phi_c_over_a.value;
            res.passed = false;
            res.counterexample = os.str();
            return res;
        }
    }
    return res;
}

inline SuiteResult verify_class_group_suite()
{
    SuiteResult res{"class groups", true, 0, {}};
    auto fail = [&](std::string msg) {
        res.passed = false;
        if (res.counterexample.empty()) res.counterexample = std::move(msg);
    };
    const std::vector<std::tuple<std::int64_t, std::int64_t, std::vector<std::int64_t>>> expected{
        {3, 1, {}}, {15, 2, {2}}, {23, 3, {3}}, {39, 4, {4}}};
    for (const auto& [d, h, inv] : expected) {
        ++res.checked;
        const ClassGroupStructure g = class_group(d);
        if (g.h != h || g.invariants != inv) fail("d=" + std::to_string(d) + ": h=" + std::to_string(g.h));
    }
    ++res.checked;
    if (is_admissible(39).admissible()) fail("d=39 reported admissible");
    for (std::int64_t d : reference_ds()) {
        ++res.checked;
        if (!is_admissible(d).admissible()) fail("d=" + std::to_string(d) + " reported inadmissible");
    }
    return res;
}

inline SuiteResult verify_census_suite(unsigned jobs = 1)
{
    SuiteResult res{"census counts", true, 0, {}};
    auto fail = [&](std::string msg) {
        res.passed = false;
        if (res.counterexample.empty()) res.counterexample = std::move(msg);
    };
    for (const auto& [x, want] : std::vector<std::pair<const char*, std::uint64_t>>{{"0.5", 0}, {"1.1", 2}, {"2.2", 5}}) {
        ++res.checked;
        const auto got = xi(3, x, jobs);
        if (got != want) fail("xi(3, " + std::string(x) + ") = " + std::to_string(got) + ", expected " + std::to_string(want));
    }
    // monotonicity and completeness under a doubled stopping bound
    for (std::int64_t d : reference_ds()) {
        std::uint64_t prev = 0;
        for (const char* x : {"10", "50", "200"}) {
            ++res.checked;
            const Rational X = Rational::from_decimal(x);
            CensusOptions loose;
            loose.bound_slack = 2;
            loose.jobs = jobs;
            CensusOptions tight;
            tight.jobs = jobs;
            const auto a = enumerate_surfaces(d, X, tight), b = enumerate_surfaces(d, X, loose);
            if (a.records != b.records) fail("d=" + std::to_string(d) + " X=" + x + ": doubled bound changes the census");
            if (a.xi() < prev) fail("d=" + std::to_string(d) + ": xi decreases at X=" + x);
            if (a.records.size() != a.xi()) fail("d=" + std::to_string(d) + ": record count differs from xi");
            prev = a.xi();
        }
    }
    const std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t, const char*, std::uint64_t>> lemma{
        {3, 1, 0, "3", 3}, {3, 1, 0, "1", 0}};
    for (const auto& [d, a, r, x, want] : lemma) {
        ++res.checked;
        const auto got = count_F_in_progression(d, a, r, Rational::from_decimal(x));
        if (got != want) fail("count_F_in_progression(" + std::to_string(d) + "," + std::to_string(a) + "," + std::to_string(r) + "," + x + ") = " + std::to_string(got));
    }
    return res;
}

enum class VerifyScope { all, orders, areas, constants, counts };

inline std::optional<VerifyScope> parse_verify_scope(std::string_view s)
{
    if (s == "all") return VerifyScope::all;
    if (s == "orders") return VerifyScope::orders;
    if (s == "areas") return VerifyScope::areas;
    if (s == "constants") return VerifyScope::constants;
    if (s == "counts") return VerifyScope::counts;
    return std::nullopt;
}

/// Runs the suites for `scope`, reporting each one through `on_result` as it finishes.
inline std::vector<SuiteResult> run_verify(VerifyScope scope, unsigned jobs = 1,
                                           const std::function<void(const SuiteResult&)>& on_result = {})
{
    std::vector<SuiteResult> out;
    auto add = [&](SuiteResult r) {
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    };
    const bool all = scope == VerifyScope::all;
    if (all || scope == VerifyScope::orders) {
        add(verify_gcd_identity_suite());
        add(verify_reduced_discriminant_suite());
        add(verify_eichler_suite());
        add(verify_norm_index_suite());
    }
    if (all || scope == VerifyScope::areas) add(verify_area_suite());
    if (all || scope == VerifyScope::constants) {
        add(verify_constant_chain_suite());
        add(verify_residue_suite());
    }
    if (all || scope == VerifyScope::counts) {
        add(verify_class_group_suite());
        add(verify_census_suite(jobs));
    }
    return out;
}

} // namespace tgsurf
