#include <gtest/gtest.h>

#include <cstdio>
#include <sstream>
#include <sys/wait.h>

#include "tgsurf/cli.hpp"

using namespace tgsurf;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome run(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

int run_binary(const std::string& args)
{
    const std::string cmd = std::string(TGSURF_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(Cli, Check)
{
    const Outcome r = run({"check", "39"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["admissible"], false);
    EXPECT_EQ(j["h"], 4);
    EXPECT_EQ(j["invariants"], nlohmann::json::array({4}));
    EXPECT_EQ(nlohmann::json::parse(run({"check", "4"}).out)["status"], "d4-constant-only");
    EXPECT_EQ(nlohmann::json::parse(run({"check", "12"}).out)["reason"], "not square-free");
}

TEST(Cli, Area)
{
    EXPECT_EQ(run({"area", "3", "1", "-1"}).out, "2/3 · π ≈ 2.094395102393195\n");
    EXPECT_EQ(run({"area", "3", "1", "-1", "--via", "order"}).out, "2/3 · π ≈ 2.094395102393195\n");
    EXPECT_EQ(run({"area", "15", "5", "-5", "3"}).out.rfind("24 · π", 0), 0U);
    const Outcome bad = run({"area", "3", "1", "1"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("degenerate circle"), std::string::npos);
}

TEST(Cli, CensusCsv)
{
    const Outcome r = run({"census", "3", "1.1", "--format", "csv"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out,
              "m,c,r,d0,D,q_num,q_den,area_decimal\n"
              "1,0,1,3,3,1,3,1.047197551196598\n"
              "2,1,1,3,3,1,3,1.047197551196598\n");
}

TEST(Cli, CensusCsvRoundTrip)
{
    for (const auto& [d, x] : std::vector<std::pair<std::string, std::string>>{{"3", "60"}, {"15", "120"}, {"23", "40"}}) {
        const Outcome r = run({"census", d, x, "--format", "csv"});
        ASSERT_EQ(r.code, 0);
        std::istringstream in(r.out);
        const auto parsed = cli::parse_census_csv(in);
        const auto direct = enumerate_surfaces(std::stoll(d), Rational::from_decimal(x));
        EXPECT_EQ(parsed, direct.records);
    }
}

TEST(Cli, CensusJson)
{
    const Outcome r = run({"census", "3", "2.2", "--records"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["xi"], 5);
    ASSERT_EQ(j["records"].size(), 5U);
    EXPECT_EQ(j["records"][2]["q_num"], 2);
    EXPECT_EQ(j["records"][2]["q_den"], 3);
    EXPECT_EQ(j["records"][2]["area_decimal"], "2.094395102393195");
    EXPECT_FALSE(nlohmann::json::parse(run({"census", "3", "2.2"}).out).contains("records"));
}

TEST(Cli, Deterministic)
{
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"census", "15", "300", "--format", "csv"}, {"census", "7", "100", "--records", "--jobs", "3"},
          {"fit", "3", "--points", "10,100"}}) {
        const Outcome a = run(args), b = run(args);
        EXPECT_EQ(a.code, 0);
        EXPECT_EQ(a.out, b.out);
    }
    std::vector<std::string> one{"census", "23", "400", "--format", "csv", "--jobs", "1"};
    std::vector<std::string> many{"census", "23", "400", "--format", "csv", "--jobs", "4"};
    EXPECT_EQ(run(one).out, run(many).out);
}

TEST(Cli, ConstantAndLemma)
{
    const Outcome c = run({"constant", "3", "--digits", "10"});
    ASSERT_EQ(c.code, 0);
    const auto j = nlohmann::json::parse(c.out);
    EXPECT_TRUE(j["consistent"].get<bool>());
    EXPECT_GE(j["truncation_prime"].get<std::int64_t>(), 1'000'000);
    EXPECT_EQ(j["L_main"]["value"].get<std::string>().substr(0, 12), "1.7352904967");

    const Outcome l = run({"lemma-count", "3", "1", "0", "3"});
    ASSERT_EQ(l.code, 0);
    EXPECT_EQ(nlohmann::json::parse(l.out)["count"], 3);
    EXPECT_EQ(run({"lemma-count", "3", "5", "0", "3"}).code, 2);
}

TEST(Cli, Fit)
{
    const Outcome r = run({"fit", "3", "--points", "0.5,100", "--format", "csv"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "X,xi,ratio,L_main,relative_deviation");
    EXPECT_NE(r.out.find("\n1/2,0,0,"), std::string::npos);
    EXPECT_EQ(run({"fit", "3", "--points", "100,10"}).code, 2);
}

TEST(Cli, VerifyOrderAndCounts)
{
    const Outcome r = run({"verify", "order", "15", "5", "-5", "3"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["areas_agree"].get<bool>());
    EXPECT_EQ(j["reduced_discriminant"], j["reduced_discriminant_formula"]);
    EXPECT_EQ(j["area_via_order"], "24");

    const Outcome counts = run({"verify", "counts"});
    EXPECT_EQ(counts.code, 0) << counts.out;
    EXPECT_NE(counts.out.find("PASS census counts"), std::string::npos);
    EXPECT_EQ(run({"verify", "everything"}).code, 64);
    EXPECT_EQ(run({"verify", "order", "3"}).code, 64);
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(run({"frobnicate"}).code, 64);
    EXPECT_EQ(run({}).code, 64);
    EXPECT_EQ(run({"area", "3"}).code, 64);
    EXPECT_EQ(run({"census", "39", "10"}).code, 2);
    EXPECT_EQ(run({"census", "3", "abc"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, BinaryExitCodes)
{
    EXPECT_EQ(run_binary("check 3"), 0);
    EXPECT_EQ(run_binary("area 3 1 -1"), 0);
    EXPECT_EQ(run_binary("nonsense"), 64);
    EXPECT_EQ(run_binary("area 12 1 -1"), 2);
}
