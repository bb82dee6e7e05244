#pragma once

// Command-line front end. dispatch() is separate from main() so tests can
// drive it with in-memory streams.

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tgsurf/census.hpp"
#include "tgsurf/classgroup.hpp"
#include "tgsurf/error.hpp"
#include "tgsurf/euler.hpp"
#include "tgsurf/hermitian.hpp"
#include "tgsurf/quatorder.hpp"
#include "tgsurf/verify.hpp"
#include "tgsurf/volume.hpp"

namespace tgsurf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitUsage = 64;

using nlohmann::ordered_json;

inline std::string format_ld(long double v, int digits = 18)
{
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

/// Integer JSON value, or a decimal string when it does not fit in 64 bits.
inline ordered_json big_json(const BigInt& v)
{
    if (v.fits_slong_p()) return static_cast<std::int64_t>(v.get_si());
    return v.get_str();
}

inline ordered_json certified_json(const Certified& c)
{
    return {{"value", format_ld(c.value)}, {"error", format_ld(c.error, 3)}};
}

inline const char* kCsvHeader = "m,c,r,d0,D,q_num,q_den,area_decimal";

inline std::string csv_row(const SurfaceRecord& s, const PiInterval& pi)
{
    std::ostringstream os;
    os << s.m << ',' << s.c << ',' << s.r << ',' << s.d0 << ',' << s.D << ',' << s.q.numerator().get_str() << ','
       << s.q.denominator().get_str() << ',' << area_decimal({s.q}, pi, 15);
    return os.str();
}

inline ordered_json record_json(const SurfaceRecord& s, const PiInterval& pi)
{
    return {{"m", s.m},
            {"c", s.c},
            {"r", s.r},
            {"d0", s.d0},
            {"D", s.D},
            {"q_num", big_json(s.q.numerator())},
            {"q_den", big_json(s.q.denominator())},
            {"area_decimal", area_decimal({s.q}, pi, 15)}};
}

/// Parses the CSV emitted by `census --format csv` back into records.
inline std::vector<SurfaceRecord> parse_census_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw domain_error("census CSV: missing header");
    std::vector<SurfaceRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() != 8) throw domain_error("census CSV: expected 8 fields in '" + line + "'");
        SurfaceRecord s;
        s.m = std::stoll(f[0]);
        s.c = std::stoll(f[1]);
        s.r = std::stoll(f[2]);
        s.d0 = std::stoll(f[3]);
        s.D = std::stoll(f[4]);
        s.q = Rational(BigInt(f[5]), BigInt(f[6]));
        out.push_back(s);
    }
    return out;
}

inline ordered_json check_json(std::int64_t d)
{
    const Admissibility a = is_admissible(d);
    ordered_json j;
    j["d"] = d;
    j["admissible"] = a.admissible();
    j["status"] = a.status == Admissibility::Status::admissible        ? "admissible"
                  : a.status == Admissibility::Status::d4_constant_only ? "d4-constant-only"
                                                                        : "rejected";
    j["reason"] = a.reason;
    if (a.group) {
        j["h"] = a.group->h;
        j["invariants"] = a.group->invariants;
    } else {
        j["h"] = nullptr;
        j["invariants"] = nullptr;
    }
    return j;
}

inline ordered_json order_report_json(const SurfaceIndex& idx)
{
    const auto [d0, D] = d0_and_D(idx.d, idx.m, idx.c);
    const OrderAreaReport rep = area_via_order_report(idx);
    const ExactArea closed = area_closed_form(idx);
    const HermitianCircle circle = pullback_circle(idx);
    ordered_json j;
    j["d"] = idx.d;
    j["m"] = idx.m;
    j["c"] = idx.c;
    j["r"] = idx.r;
    j["d0"] = d0;
    j["D"] = D;
    j["circle"] = {{"a", circle.a}, {"b", circle.b}, {"c", circle.c0}};
    const auto& p = rep.order.params;
    j["params"] = {{"alpha1", p.alpha1}, {"alpha2", p.alpha2}, {"beta", p.beta}, {"d0", p.d0}};
    ordered_json basis = ordered_json::array();
    for (const auto& e : rep.order.basis) basis.push_back({e.t.str(), e.x.str(), e.y.str(), e.z.str()});
    j["basis"] = basis;
    j["closed_under_multiplication"] = is_closed_under_multiplication(rep.order);
    j["reduced_discriminant"] = rep.reduced_disc;
    j["reduced_discriminant_formula"] = discriminant_from_params(idx.d, D, d0);
    ordered_json local = ordered_json::array();
    for (const LocalFactor& f : rep.local) {
        local.push_back({{"p", f.p},
                         {"eichler", f.eichler},
                         {"eichler_closed", eichler_symbol_closed(idx.d, D, d0, f.p)},
                         {"nrd_index", f.index},
                         {"nrd_index_closed", nrd_index(idx.d, D, d0, f.p)}});
    }
    j["local"] = local;
    j["area_via_order"] = rep.area.q.str();
    j["area_closed_form"] = closed.q.str();
    j["areas_agree"] = rep.area == closed;
    return j;
}

inline unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

inline std::vector<Rational> parse_points(const std::string& csv)
{
    std::vector<Rational> out;
    std::stringstream ss(csv);
    for (std::string cell; std::getline(ss, cell, ',');)
        if (!cell.empty()) out.push_back(Rational::from_decimal(cell));
    if (out.empty()) throw domain_error("--points needs at least one value");
    return out;
}

/// Runs one command line (without the program name). Exit codes: 0 success,
/// 1 failed verification, 2 domain error, 64 usage error.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Totally geodesic surfaces in Bianchi orbifolds", "tgsurf"};
    app.require_subcommand(1);
    app.fallthrough();
    unsigned jobs = default_jobs();
    app.add_option("--jobs", jobs, "worker threads for census enumeration")->check(CLI::PositiveNumber);

    std::int64_t d = 0, m = 0, c = 0, r = 1, a = 1;
    std::string x_text, format = "json", points, via = "closed";
    bool records = false;
    int digits = 12;
    std::vector<std::string> verify_args;

    auto* check = app.add_subcommand("check", "class group and admissibility of d");
    check->add_option("d", d)->required();

    auto* area = app.add_subcommand("area", "exact area of S_{m,c,r}");
    area->add_option("d", d)->required();
    area->add_option("m", m)->required();
    area->add_option("c", c)->required();
    area->add_option("r", r);
    area->add_option("--via", via, "closed | order")->check(CLI::IsMember({"closed", "order"}));

    auto* census = app.add_subcommand("census", "surfaces of area below X");
    census->add_option("d", d)->required();
    census->add_option("X", x_text)->required();
    census->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    census->add_flag("--records", records, "include records in JSON output");

    auto* constant = app.add_subcommand("constant", "leading constant in both Euler-product forms");
    constant->add_option("d", d)->required();
    constant->add_option("--digits", digits)->check(CLI::Range(1, 15));

    auto* fit = app.add_subcommand("fit", "xi(X)/X against the leading constant");
    fit->add_option("d", d)->required();
    fit->add_option("--points", points, "comma-separated ascending X values")->required();
    fit->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

    auto* lemma = app.add_subcommand("lemma-count", "#{n = r mod a : F(n) < X}");
    lemma->add_option("d", d)->required();
    lemma->add_option("a", a)->required();
    lemma->add_option("r", r)->required();
    lemma->add_option("X", x_text)->required();

    auto* verify = app.add_subcommand("verify", "all | orders | areas | constants | counts | order <d> <m> <c> [<r>]");
    verify->add_option("args", verify_args)->required();

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "tgsurf: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (check->parsed()) {
            out << check_json(d).dump(2) << "\n";
        } else if (area->parsed()) {
            const SurfaceIndex idx{d, m, c, r};
            const ExactArea q = via == "order" ? area_via_order(idx) : area_closed_form(idx);
            out << q.symbolic() << " ≈ " << area_decimal(q, 15) << "\n";
        } else if (census->parsed()) {
            const Rational X = Rational::from_decimal(x_text);
            CensusOptions opt;
            opt.jobs = jobs;
            opt.materialize_r = true;
            const CensusResult res = enumerate_surfaces(d, X, opt);
            const PiInterval pi = pi_interval(60);
            if (format == "csv") {
                out << kCsvHeader << "\n";
                for (const auto& s : res.records) out << csv_row(s, pi) << "\n";
            } else {
                ordered_json j;
                j["d"] = d;
                j["X"] = x_text;
                j["xi"] = res.xi();
                j["pairs"] = res.pair_count;
                j["r_multiplicity"] = res.r_multiplicity;
                if (records) {
                    ordered_json arr = ordered_json::array();
                    for (const auto& s : res.records) arr.push_back(record_json(s, pi));
                    j["records"] = arr;
                }
                out << j.dump(2) << "\n";
            }
        } else if (constant->parsed()) {
            const std::uint32_t P = std::max<std::uint32_t>(truncation_for_digits(digits), 1'000'000);
            const ConstantReport rep = leading_constant_at(d, P);
            const EulerProduct C = constant_C_at(d, P);
            ordered_json j;
            j["d"] = d;
            j["truncation_prime"] = rep.truncation_prime;
            j["tail_bound"] = format_ld(rep.tail_bound, 3);
            j["C"] = certified_json(C.value);
            j["L_main"] = certified_json(rep.L_main);
            j["L_census_form"] = certified_json(rep.L_census_form);
            j["difference"] = format_ld(std::fabs(rep.L_main.value - rep.L_census_form.value), 3);
            j["consistent"] = rep.consistent();
            out << j.dump(2) << "\n";
        } else if (fit->parsed()) {
            const auto rows = fit_report(d, parse_points(points), jobs);
            if (format == "csv") {
                out << "X,xi,ratio,L_main,relative_deviation\n";
                for (const auto& row : rows)
                    out << row.X.str() << ',' << row.xi << ',' << format_ld(row.ratio, 15) << ',' << format_ld(row.L_main, 15)
                        << ',' << format_ld(row.deviation, 6) << "\n";
            } else {
                ordered_json arr = ordered_json::array();
                for (const auto& row : rows)
                    arr.push_back({{"X", row.X.str()},
                                   {"xi", row.xi},
                                   {"ratio", format_ld(row.ratio, 15)},
                                   {"L_main", format_ld(row.L_main, 15)},
                                   {"relative_deviation", format_ld(row.deviation, 6)}});
                out << ordered_json{{"d", d}, {"rows", arr}}.dump(2) << "\n";
            }
        } else if (lemma->parsed()) {
            const auto count = count_F_in_progression(d, a, r, Rational::from_decimal(x_text));
            out << ordered_json{{"d", d}, {"a", a}, {"r", r}, {"X", x_text}, {"count", count}}.dump(2) << "\n";
        } else if (verify->parsed()) {
            if (verify_args.front() == "order") {
                if (verify_args.size() != 4 && verify_args.size() != 5) {
                    err << "tgsurf: usage: verify order <d> <m> <c> [<r>]\n";
                    return kExitUsage;
                }
                SurfaceIndex idx{std::stoll(verify_args[1]), std::stoll(verify_args[2]), std::stoll(verify_args[3]), 1};
                if (verify_args.size() == 5) idx.r = std::stoll(verify_args[4]);
                const ordered_json j = order_report_json(idx);
                out << j.dump(2) << "\n";
                return j["areas_agree"].get<bool>() ? kExitOk : kExitFailure;
            }
            const auto scope = parse_verify_scope(verify_args.front());
            if (!scope || verify_args.size() != 1) {
                err << "tgsurf: unknown verify scope '" << verify_args.front() << "'\n";
                return kExitUsage;
            }
            bool ok = true;
            run_verify(*scope, jobs, [&](const SuiteResult& s) {
                out << (s.passed ? "PASS " : "FAIL ") << s.name << " (" << s.checked << " checked)";
                if (!s.passed) out << ": " << s.counterexample;
                out << "\n";
                out.flush();
                ok = ok && s.passed;
            });
            return ok ? kExitOk : kExitFailure;
        }
    } catch (const domain_error& e) {
        err << "tgsurf: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::invalid_argument& e) {
        err << "tgsurf: invalid number: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        err << "tgsurf: number out of range: " << e.what() << "\n";
        return kExitUsage;
    } catch (const consistency_error& e) {
        err << "tgsurf: internal inconsistency: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}

} // namespace tgsurf::cli
