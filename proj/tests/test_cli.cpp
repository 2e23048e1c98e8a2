#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace telliptic;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "telliptic");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() /
               ("telliptic_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        std::filesystem::remove_all(dir_);
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }

    static std::string slurp(const std::string& p) {
        std::ifstream f(p);
        return {std::istreambuf_iterator<char>(f), {}};
    }

    std::filesystem::path dir_;
};

}  // namespace

TEST(CliAngles, Parse) {
    EXPECT_DOUBLE_EQ(cli::parse_angle("pi/3"), kPi / 3);
    EXPECT_DOUBLE_EQ(cli::parse_angle("2pi/3"), 2 * kPi / 3);
    EXPECT_DOUBLE_EQ(cli::parse_angle("7*pi/4"), 7 * kPi / 4);
    EXPECT_DOUBLE_EQ(cli::parse_angle("\xcf\x80/2"), kPi / 2);
    EXPECT_DOUBLE_EQ(cli::parse_angle("-pi"), -kPi);
    EXPECT_DOUBLE_EQ(cli::parse_angle("0.5"), 0.5);
    EXPECT_DOUBLE_EQ(cli::parse_angle(" 1.5pi "), 1.5 * kPi);
    EXPECT_THROW(cli::parse_angle("pie"), ParseError);
    EXPECT_THROW(cli::parse_angle("pi/0"), ParseError);
    EXPECT_THROW(cli::parse_angle("1.0x"), ParseError);
    EXPECT_EQ(cli::parse_angles("pi/3,pi/3,1").size(), 3u);
    const auto zs = cli::parse_complex_list("0,1:-2");
    ASSERT_EQ(zs.size(), 2u);
    EXPECT_EQ(zs[1], cplx(1, -2));
}

TEST_F(Cli, BuildThenClassify) {
    const Result b = run({"build-dt", "-n", "4", "--alpha", "pi/3,pi/3,pi/3,pi/3", "--seed", "1", "-o", path("dt.json")});
    ASSERT_EQ(b.code, 0) << b.err;
    const json built = json::parse(slurp(path("dt.json")));
    EXPECT_EQ(built.at("version"), io::kVersion);
    EXPECT_EQ(built.at("config").at("seed"), 1);
    EXPECT_LT(built.at("relation_residual").get<double>(), 1e-9);
    EXPECT_EQ(built.at("chain").at("orientations"), json::array({"ccw", "ccw"}));
    EXPECT_NEAR(built.at("toledo").get<double>(), 1.0 / 3.0, 1e-12);

    const Result c = run({"classify", "-i", path("dt.json"), "--max-curves", "200"});
    ASSERT_EQ(c.code, 0) << c.err;
    const json v = json::parse(c.out);
    EXPECT_EQ(v.at("verdict").at("tag"), "DT");
    EXPECT_NEAR(v.at("verdict").at("toledo").get<double>(), 1.0 / 3.0, 1e-9);
    EXPECT_EQ(v.at("config").at("budget").at("max_curves"), 200);

    const Result cert = run({"certify", "-i", path("dt.json"), "--max-curves", "100"});
    ASSERT_EQ(cert.code, 0) << cert.err;
    const json rep = json::parse(cert.out).at("report");
    EXPECT_EQ(rep.at("status"), "Certified");
    EXPECT_EQ(rep.at("certified"), "up to budget");
}

TEST_F(Cli, BuildIsDeterministic) {
    const std::vector<std::string> args{"build-dt", "-n", "6", "--alpha", "0.5,0.6,0.7,0.8,0.9,1.0", "--seed", "42"};
    const Result x = run(args), y = run(args);
    ASSERT_EQ(x.code, 0);
    EXPECT_EQ(x.out, y.out);
    auto other = args;
    other.back() = "43";
    EXPECT_NE(run(other).out, x.out);
}

TEST_F(Cli, SeedRequired) {
    EXPECT_EQ(run({"build-dt", "-n", "3", "--alpha", "1,1,1"}).code, 3);
    EXPECT_EQ(run({"sample", "-n", "3", "--alpha", "1,1,1"}).code, 3);
}

TEST_F(Cli, ClassifyGenusTwo) {
    const RealMatrix A = rotation_about(HPoint{0, 1}, kPi / 2), B = rotation_about(HPoint{0, 2}, kPi / 2);
    const RealRep r = RealRep::checked(Presentation{2, 0}, {A, B, B, A});
    const std::string in = write("g2.json", io::representation_json(r).dump());
    const Result c = run({"classify", "-i", in});
    ASSERT_EQ(c.code, 0) << c.err;
    const json v = json::parse(c.out).at("verdict");
    EXPECT_EQ(v.at("tag"), "NotTotallyElliptic");
    EXPECT_EQ(v.at("witness_class"), "Hyperbolic");
    EXPECT_GT(v.at("witness_abs_trace").get<double>(), 2.0);
}

TEST_F(Cli, SampleAcceptsAndReportsEmpty) {
    const Result ok = run({"sample", "-n", "3", "--alpha", "pi/2,pi/2,pi/2", "--seed", "3"});
    ASSERT_EQ(ok.code, 0) << ok.err;
    EXPECT_EQ(json::parse(ok.out).at("status"), "Accepted");

    const Result empty = run({"sample", "-n", "3", "--alpha", "2.5,2.5,2.5", "--seed", "3", "--attempts", "500"});
    EXPECT_EQ(empty.code, 0);  // proven empty
    const json e = json::parse(empty.out);
    EXPECT_EQ(e.at("status"), "Empty");
    EXPECT_EQ(e.at("proven"), true);
    EXPECT_EQ(e.at("attempts_made"), 500);

    // no acceptance within a tiny budget on four punctures is only advisory
    const Result adv = run({"sample", "-n", "4", "--alpha", "6,6,6,6", "--seed", "3", "--attempts", "3"});
    if (json::parse(adv.out).at("status") == "Empty") {
        EXPECT_EQ(adv.code, 2);
        EXPECT_EQ(json::parse(adv.out).at("proven"), false);
    }
}

TEST_F(Cli, OrbitWritesCsvAndSummary) {
    ASSERT_EQ(run({"build-dt", "-n", "4", "--alpha", "pi/3,pi/3,pi/3,pi/3", "--seed", "1", "-o", path("dt.json")}).code, 0);
    const Result o = run({"orbit", "-i", path("dt.json"), "--iterations", "300", "--seed", "5", "--csv", path("orbit.csv"),
                          "-o", path("summary.json")});
    ASSERT_EQ(o.code, 0) << o.err;
    const json s = json::parse(slurp(path("summary.json"))).at("summary");
    EXPECT_EQ(s.at("iterations"), 300);
    EXPECT_EQ(s.at("bounded_by_two"), true);
    EXPECT_EQ(s.at("reprojected"), true);
    const std::string csv = slurp(path("orbit.csv"));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 301);
    EXPECT_EQ(csv.rfind("iterate,window,power,", 0), 0u);
    EXPECT_FALSE(std::filesystem::exists(path("orbit.csv.tmp")));

    const Result again = run({"orbit", "-i", path("dt.json"), "--iterations", "300", "--seed", "5", "--csv", path("orbit2.csv"),
                              "-o", path("summary2.json")});
    ASSERT_EQ(again.code, 0);
    EXPECT_EQ(slurp(path("orbit.csv")), slurp(path("orbit2.csv")));
}

TEST_F(Cli, ComplexExample) {
    const Result r = run({"complex-example", "-n", "3", "--theta", "1,1.4142135623730951", "--z", "0,1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j.at("verdict").at("tag"), "ReducibleNonUnitary");
    EXPECT_EQ(j.at("representation").at("field"), "complex");
    // output round-trips through classify
    const std::string in = write("cx.json", j.dump());
    const Result c = run({"classify", "-i", in});
    ASSERT_EQ(c.code, 0) << c.err;
    EXPECT_EQ(json::parse(c.out).at("verdict").at("tag"), "ReducibleNonUnitary");

    const Result bad = run({"complex-example", "-n", "3", "--theta", "pi,1"});
    EXPECT_EQ(bad.code, 3);
    EXPECT_NE(bad.err.find("error"), std::string::npos);
}

TEST_F(Cli, FeasibleBetas) {
    const Result j = run({"feasible-betas", "--alpha", "pi/3,pi/3,pi/3,pi/3"});
    ASSERT_EQ(j.code, 0) << j.err;
    const json f = json::parse(j.out);
    EXPECT_NEAR(f.at("beta")[0].get<double>(), kPi, 1e-12);
    EXPECT_NEAR(f.at("intervals")[0][0].get<double>(), 2 * kPi / 3, 1e-12);
    EXPECT_EQ(f.at("orientation"), "ccw");
    const Result c = run({"feasible-betas", "--alpha", "pi/3,pi/3,pi/3,pi/3", "--format", "csv"});
    ASSERT_EQ(c.code, 0);
    EXPECT_EQ(c.out.rfind("k,lo,hi,beta\n1,", 0), 0u);
    EXPECT_EQ(run({"feasible-betas", "--alpha", "pi/2,pi/2,pi/2,pi/2"}).code, 3);
}

TEST_F(Cli, InputErrors) {
    EXPECT_EQ(run({}).code, 3);
    EXPECT_EQ(run({"frobnicate"}).code, 3);
    EXPECT_EQ(run({"classify", "-i", path("missing.json")}).code, 3);
    EXPECT_EQ(run({"classify", "-i", write("bad.json", "{not json")}).code, 3);
    const std::string unknown = write(
        "unknown.json",
        R"({"presentation":{"genus":0,"punctures":3},"images":{"c1":[1,0,0,1],"c2":[1,0,0,1],"c3":[1,0,0,1],"a1":[1,0,0,1]}})");
    const Result u = run({"classify", "-i", unknown});
    EXPECT_EQ(u.code, 3);
    const std::string broken = write(
        "broken.json",
        R"({"presentation":{"genus":0,"punctures":3},"images":{"c1":[2,0,0,0.5],"c2":[1,0,0,1],"c3":[1,0,0,1]}})");
    const Result b = run({"classify", "-i", broken});
    EXPECT_EQ(b.code, 3);
    EXPECT_NE(b.err.find("relation"), std::string::npos);
    EXPECT_EQ(run({"build-dt", "-n", "3", "--alpha", "1,1", "--seed", "1"}).code, 3);
    EXPECT_EQ(run({"build-dt", "-n", "3", "--alpha", "2.5,2.5,2.5", "--seed", "1"}).code, 3);
    EXPECT_EQ(run({"certify", "-i", write("x.json", "{}"), "--max-curves", "0"}).code, 3);
}

TEST_F(Cli, Help) {
    const Result h = run({"--help"});
    EXPECT_EQ(h.code, 0);
    EXPECT_NE(h.out.find("build-dt"), std::string::npos);
}
