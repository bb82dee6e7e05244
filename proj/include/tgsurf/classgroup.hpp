#pragma once

// Form class group of discriminant -d (isomorphic to the ideal class group
// of Q(sqrt(-d)) for fundamental -d), and the admissibility test for d.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "tgsurf/error.hpp"
#include "tgsurf/ntkernel.hpp"

namespace tgsurf {

/// Positive definite binary quadratic form a x^2 + b xy + c y^2.
struct QuadraticForm {
    std::int64_t a = 1, b = 1, c = 1;

    std::int64_t discriminant() const { return b * b - 4 * a * c; }
    bool is_primitive() const { return gcd3(a, b, c) == 1; }
    bool is_reduced() const
    {
        const std::int64_t abs_b = b < 0 ? -b : b;
        if (!(abs_b <= a && a <= c)) return false;
        if ((abs_b == a || a == c) && b < 0) return false;
        return true;
    }

    friend bool operator==(const QuadraticForm&, const QuadraticForm&) = default;
    friend auto operator<=>(const QuadraticForm& x, const QuadraticForm& y)
    {
        return std::tie(x.a, x.b, x.c) <=> std::tie(y.a, y.b, y.c);
    }
};

namespace detail {

inline void require_class_group_d(std::int64_t d)
{
    if (d <= 0 || d % 4 != 3) throw domain_error("class group: d must be positive and = 3 mod 4");
    if (!is_square_free(static_cast<std::uint64_t>(d))) throw domain_error("class group: d must be square-free");
}

// Moves b into (-a, a] keeping the discriminant.
inline QuadraticForm normalize(QuadraticForm f)
{
    const std::int64_t k = floor_div(f.a - f.b, 2 * f.a);
    const std::int64_t nb = f.b + 2 * f.a * k;
    f.c = f.c + k * (f.b + f.a * k);
    f.b = nb;
    return f;
}

} // namespace detail

/// Reduced representative of the proper equivalence class of f.
inline QuadraticForm reduce(QuadraticForm f)
{
    if (f.a <= 0 || f.discriminant() >= 0) throw domain_error("reduce: form must be positive definite");
    f = detail::normalize(f);
    while (f.a > f.c) {
        f = detail::normalize({f.c, -f.b, f.a});
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
}

/// The identity element x^2 + xy + ((1+d)/4) y^2.
inline QuadraticForm principal_form(std::int64_t d) { return {1, 1, (1 + d) / 4}; }

inline QuadraticForm inverse(const QuadraticForm& f) { return reduce({f.a, -f.b, f.c}); }

/// All reduced primitive forms of discriminant -d, sorted lexicographically.
inline std::vector<QuadraticForm> reduced_forms(std::int64_t d)
{
    detail::require_class_group_d(d);
    std::vector<QuadraticForm> out;
    for (std::int64_t a = 1; 3 * a * a <= d; ++a) {
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            const std::int64_t num = b * b + d;
            if (num % (4 * a) != 0) continue;
            const QuadraticForm f{a, b, num / (4 * a)};
            if (f.is_reduced() && f.is_primitive()) out.push_back(f);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Gauss composition of two primitive forms of equal discriminant, followed
/// by reduction.
inline QuadraticForm compose(QuadraticForm f, QuadraticForm g)
{
    if (f.discriminant() != g.discriminant()) throw domain_error("compose: discriminants differ");
    if (!f.is_primitive() || !g.is_primitive()) throw domain_error("compose: forms must be primitive");
    const std::int64_t disc = f.discriminant();
    if (f.a > g.a) std::swap(f, g);
    const std::int64_t s = (f.b + g.b) / 2;
    const std::int64_t n = g.b - s;

    std::int64_t y1 = 0, dd = f.a;
    if (g.a % f.a != 0) {
        std::int64_t u = 0, v = 0;
        dd = ext_gcd(g.a, f.a, u, v);
        y1 = u;
    }
    std::int64_t x2 = 0, y2 = -1, d1 = dd;
    if (s % dd != 0) {
        std::int64_t x = 0, y = 0;
        d1 = ext_gcd(s, dd, x, y);
        x2 = x;
        y2 = -y;
    }
    const std::int64_t v1 = f.a / d1;
    const std::int64_t v2 = g.a / d1;
    std::int64_t r = (y1 * y2 * n - x2 * g.c) % v1;
    if (r < 0) r += v1;
    const std::int64_t a3 = v1 * v2;
    const std::int64_t b3 = g.b + 2 * v2 * r;
    const std::int64_t num = b3 * b3 - disc;
    if (num % (4 * a3) != 0) throw consistency_error("compose: composed form has wrong discriminant");
    return reduce({a3, b3, num / (4 * a3)});
}

/// Finite abelian group as h with elementary divisors d1 | d2 | ... (each > 1).
struct ClassGroupStructure {
    std::int64_t h = 1;
    std::vector<std::int64_t> invariants;
    friend bool operator==(const ClassGroupStructure&, const ClassGroupStructure&) = default;
};

/// Full Cayley table of the composition law over reduced_forms(d).
struct CompositionTable {
    std::vector<QuadraticForm> forms;
    std::vector<std::vector<std::size_t>> product;
    std::size_t identity = 0;

    std::size_t power(std::size_t g, std::int64_t k) const
    {
        std::size_t acc = identity;
        for (std::int64_t i = 0; i < k; ++i) acc = product[acc][g];
        return acc;
    }
};

inline CompositionTable composition_table(std::int64_t d)
{
    CompositionTable t;
    t.forms = reduced_forms(d);
    std::map<QuadraticForm, std::size_t> index;
    for (std::size_t i = 0; i < t.forms.size(); ++i) index[t.forms[i]] = i;
    t.identity = index.at(principal_form(d));
    t.product.assign(t.forms.size(), std::vector<std::size_t>(t.forms.size()));
    for (std::size_t i = 0; i < t.forms.size(); ++i)
        for (std::size_t j = 0; j < t.forms.size(); ++j) {
            const auto it = index.find(compose(t.forms[i], t.forms[j]));
            if (it == index.end()) throw consistency_error("composition left the set of reduced forms");
            t.product[i][j] = it->second;
        }
    return t;
}

/// Group structure from element orders: for each p | h the number of cyclic
/// p-factors of order >= p^k is log_p(|G[p^k]| / |G[p^(k-1)]|).
inline ClassGroupStructure structure_from_table(const CompositionTable& t)
{
    ClassGroupStructure out;
    out.h = static_cast<std::int64_t>(t.forms.size());
    std::vector<std::vector<std::int64_t>> per_prime_parts; // each list descending
    for (const auto& [p64, e] : factorize(static_cast<std::uint64_t>(out.h)).factors) {
        const auto p = static_cast<std::int64_t>(p64);
        std::vector<std::int64_t> counts{1};
        std::int64_t pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            std::int64_t n = 0;
            for (std::size_t g = 0; g < t.forms.size(); ++g)
                if (t.power(g, pk) == t.identity) ++n;
            counts.push_back(n);
        }
        // at_least[k] = number of factors of order >= p^k
        std::vector<int> at_least(e + 2, 0);
        for (unsigned k = 1; k <= e; ++k) {
            std::int64_t ratio = counts[k] / counts[k - 1];
            int lg = 0;
            while (ratio > 1) {
                if (ratio % p != 0) throw consistency_error("class group: non-p-power torsion ratio");
                ratio /= p;
                ++lg;
            }
            at_least[k] = lg;
        }
        std::vector<std::int64_t> parts;
        for (unsigned k = e; k >= 1; --k) {
            const int exactly = at_least[k] - at_least[k + 1];
            std::int64_t pw = 1;
            for (unsigned i = 0; i < k; ++i) pw *= p;
            for (int i = 0; i < exactly; ++i) parts.push_back(pw);
        }
        per_prime_parts.push_back(parts);
    }
    std::size_t rank = 0;
    for (const auto& parts : per_prime_parts) rank = std::max(rank, parts.size());
    std::vector<std::int64_t> inv(rank, 1); // descending by construction
    for (const auto& parts : per_prime_parts)
        for (std::size_t i = 0; i < parts.size(); ++i) inv[i] *= parts[i];
    std::reverse(inv.begin(), inv.end());
    out.invariants = inv;
    std::int64_t prod = 1;
    for (auto x : inv) prod *= x;
    if (prod != out.h) throw consistency_error("class group: invariants do not multiply to h");
    return out;
}

namespace detail {

/// $TGSURF_CACHE_DIR/classgroup-<d>.txt holds "h inv1 inv2 ...".
inline std::optional<std::filesystem::path> class_group_cache_file(std::int64_t d)
{
    const char* dir = std::getenv("TGSURF_CACHE_DIR");
    if (dir == nullptr || *dir == '\0') return std::nullopt;
    return std::filesystem::path(dir) / ("classgroup-" + std::to_string(d) + ".txt");
}

inline std::optional<ClassGroupStructure> read_class_group_cache(std::int64_t d)
{
    const auto file = class_group_cache_file(d);
    if (!file) return std::nullopt;
    std::ifstream in(*file);
    ClassGroupStructure g;
    if (!(in >> g.h) || g.h < 1) return std::nullopt;
    std::int64_t prod = 1;
    for (std::int64_t x; in >> x;) {
        if (x < 2) return std::nullopt;
        g.invariants.push_back(x);
        prod *= x;
    }
    if (prod != g.h) return std::nullopt;
    return g;
}

inline void write_class_group_cache(std::int64_t d, const ClassGroupStructure& g)
{
    const auto file = class_group_cache_file(d);
    if (!file) return;
    std::error_code ec;
    std::filesystem::create_directories(file->parent_path(), ec);
    std::ofstream out(*file);
    out << g.h;
    for (auto x : g.invariants) out << ' ' << x;
    out << '\n';
}

} // namespace detail

/// Memoized in-process; also on disk when TGSURF_CACHE_DIR is set.
inline ClassGroupStructure class_group(std::int64_t d)
{
    static std::mutex mu;
    static std::map<std::int64_t, ClassGroupStructure> memo;
    {
        std::lock_guard lock(mu);
        if (auto it = memo.find(d); it != memo.end()) return it->second;
    }
    detail::require_class_group_d(d);
    ClassGroupStructure g;
    if (auto cached = detail::read_class_group_cache(d)) {
        g = *cached;
    } else {
        g = structure_from_table(composition_table(d));
        detail::write_class_group_cache(d, g);
    }
    std::lock_guard lock(mu);
    memo.emplace(d, g);
    return g;
}

struct Admissibility {
    enum class Status { admissible, d4_constant_only, rejected };
    Status status = Status::rejected;
    std::string reason;
    std::optional<ClassGroupStructure> group;

    bool admissible() const { return status == Status::admissible; }
};

inline Admissibility is_admissible(std::int64_t d)
{
    Admissibility out;
    if (d == 4) {
        out.status = Admissibility::Status::d4_constant_only;
        out.reason = "d4-constant-only";
        out.group = ClassGroupStructure{1, {}};
        return out;
    }
    if (d < 1) {
        out.reason = "d must be positive";
        return out;
    }
    if (!is_square_free(static_cast<std::uint64_t>(d))) {
        out.reason = "not square-free";
        return out;
    }
    if (d % 4 != 3) {
        out.reason = "not congruent to 3 mod 4";
        return out;
    }
    out.group = class_group(d);
    for (std::int64_t inv : out.group->invariants) {
        if (inv % 4 == 0) {
            out.reason = "invariant " + std::to_string(inv) + " divisible by 4";
            return out;
        }
    }
    out.status = Admissibility::Status::admissible;
    out.reason = "ok";
    return out;
}

/// Throws unless d satisfies the class-group hypothesis.
inline void require_admissible(std::int64_t d)
{
    const auto v = is_admissible(d);
    if (!v.admissible()) throw domain_error("d = " + std::to_string(d) + " is not admissible: " + v.reason);
}

} // namespace tgsurf
