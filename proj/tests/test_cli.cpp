#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qtt/tensorized.hpp"
#include "qtt_cli/cli.hpp"
#include "qtt_cli/function_spec.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "qtt");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = qtt::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("qtt_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    fs::path dir_;
};

}  // namespace

TEST_F(Cli, TensorizeSquare) {
    const auto r = run({"tensorize", "--func", "poly:0,0,1", "--b", "2", "--d", "4", "--m", "2", "--out", path("sq.qttf")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("ranks 2,3,3,3"), std::string::npos);
    const auto tf = qtt::read_qttf(path("sq.qttf"));
    EXPECT_EQ(qtt::rank_profile(tf).ranks, (std::vector<int>{2, 3, 3, 3}));
    EXPECT_NEAR(tf.eval(0.3), 0.09, 1e-13);
}

TEST_F(Cli, TensorizeLevelZero) {
    const auto r = run({"tensorize", "--func", "sin:1", "--d", "0", "--m", "3", "--out", path("z.qttf")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(qtt::read_qttf(path("z.qttf")).cells(), 1u);
}

TEST_F(Cli, MissingSamplesFile) {
    const std::string missing = path("nope.csv");
    const auto r = run({"tensorize", "--func", "samples:" + missing, "--d", "2", "--out", path("x.qttf")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find(missing), std::string::npos);
    EXPECT_FALSE(fs::exists(path("x.qttf")));
}

TEST_F(Cli, SamplesFile) {
    {
        std::ofstream os(path("s.csv"));
        os << "x,y\n";
        for (int k = 0; k <= 64; ++k) os << k / 64.0 << ',' << 2.0 * k / 64.0 << '\n';
    }
    const auto r = run({"ranks", "--func", "samples:" + path("s.csv"), "--d", "3", "--m", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "nu,r_nu\n1,2\n2,2\n3,2\n");
    const auto sparse = run({"ranks", "--func", "samples:" + path("s.csv"), "--d", "5", "--m", "1"});
    EXPECT_EQ(sparse.code, 2);
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"tensorize", "--d", "2"}).code, 2);
    EXPECT_EQ(run({"tensorize", "--func", "poly:1", "--b", "1"}).code, 2);
    EXPECT_EQ(run({"tensorize", "--func", "wat:1"}).code, 2);
    EXPECT_EQ(run({"sweep", "--func", "sqrt", "--p", "-1"}).code, 2);
    EXPECT_EQ(run({"verify", "--inject-fault", "other"}).code, 2);
    EXPECT_EQ(run({"tensorize", "--func", "poly:1", "--d", "30", "--m", "3", "--out", path("big.qttf")}).code, 2);
    EXPECT_FALSE(fs::exists(path("big.qttf")));
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, SweepIsReproducible) {
    const std::vector<std::string> base{"sweep", "--func", "abs_power:0.3,0.5", "--m", "1", "--d-grid", "1,2,3,4",
                                        "--tol-grid", "0,1e-3", "--measure", "N,C,S,rmax,R", "--seed", "7"};
    auto a = base, b = base;
    a.insert(a.end(), {"--out", path("a.csv")});
    b.insert(b.end(), {"--out", path("b.csv")});
    ASSERT_EQ(run(a).code, 0);
    ASSERT_EQ(run(b).code, 0);
    const std::string ca = slurp(path("a.csv"));
    EXPECT_EQ(ca, slurp(path("b.csv")));
    EXPECT_EQ(ca.substr(0, ca.find('\n')), "measure,n,d,p,error,ranks");
}

TEST_F(Cli, SweepExactHasZeroTail) {
    const auto r = run({"sweep", "--func", "poly:1,-2", "--m", "1", "--d-grid", "0,1,2", "--out", path("e.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream is(path("e.csv"));
    std::string line, last;
    while (std::getline(is, line))
        if (!line.empty()) last = line;
    std::vector<std::string> cols;
    std::stringstream ss(last);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    ASSERT_GE(cols.size(), 5u);
    EXPECT_LE(std::stod(cols[4]), 1e-10);
}

TEST_F(Cli, VerifyDefaultPasses) {
    const auto r = run({"verify", "--out", path("v.json")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
    EXPECT_NE(slurp(path("v.json")).find("\"status\": \"pass\""), std::string::npos);
}

TEST_F(Cli, VerifyFaultNamesLemma) {
    const auto r = run({"verify", "--inject-fault", "no-tol-split", "--m", "1", "--d", "6", "--out", path("f.json")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("rounding-error-bound"), std::string::npos);
}

TEST_F(Cli, VerifyBaseThree) {
    const auto r = run({"verify", "--b", "3", "--m", "0", "--out", path("b3.json")});
    EXPECT_EQ(r.code, 0) << r.err;
}

TEST_F(Cli, Density) {
    const auto r = run({"density", "--func", "indicator:1/3", "--b", "2", "--d", "12", "--p", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("within_bound yes"), std::string::npos);
    EXPECT_EQ(run({"density", "--func", "sqrt", "--d", "4"}).code, 2);
}

TEST_F(Cli, Extend) {
    const auto r = run({"extend", "--func", "poly:0,1", "--m", "1", "--d", "2", "--to", "6", "--out", path("e.qttt")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("ranks_rounded 2,2,2,2,2,2"), std::string::npos);
    EXPECT_TRUE(fs::exists(path("e.qttt")));
    EXPECT_EQ(run({"extend", "--func", "poly:0,1", "--d", "3", "--to", "2"}).code, 2);
}

TEST(FunctionSpec, Parsing) {
    using qtt::cli::parse_function;
    EXPECT_NEAR(parse_function("poly:1,2,3").f(0.5), 1 + 1 + 0.75, 1e-15);
    EXPECT_NEAR(parse_function("sin:2").f(0.125), 1.0, 1e-15);
    EXPECT_NEAR(parse_function("abs_power:0.5,2").f(0.0), 0.25, 1e-15);
    const auto ind = parse_function("indicator:1/4,1/2@3,0,-1");
    ASSERT_TRUE(ind.simple.has_value());
    EXPECT_EQ(ind.f(0.1), 3.0);
    EXPECT_EQ(ind.f(0.25), 0.0);
    EXPECT_EQ(ind.f(0.9), -1.0);
    EXPECT_EQ(parse_function("indicator:1/3").f(0.5), 0.0);
    EXPECT_THROW(parse_function("abs_power:1"), qtt::DomainError);
    EXPECT_THROW(parse_function("poly:"), qtt::DomainError);
    EXPECT_THROW(parse_function("indicator:0.5@1"), qtt::DomainError);
    EXPECT_DOUBLE_EQ(qtt::cli::parse_number("3/8"), 0.375);
    EXPECT_THROW(qtt::cli::parse_number("1/0"), qtt::DomainError);
}
