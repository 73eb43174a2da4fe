#include "dpricing/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dpricing {
namespace {

namespace fs = std::filesystem;
const std::string kData = DPRICING_TEST_DATA;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dpricing_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, NoArgumentsPrintsUsage) {
  const auto r = run({});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST_F(CliTest, UnknownFlagPrintsUsage) {
  const auto r = run({"verify", "--bogus"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST_F(CliTest, Table1OnStdout) {
  const auto r = run({"scenario", "--name", "table1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("700"), std::string::npos);
  EXPECT_NE(r.out.find("576 (-17%)"), std::string::npos);
  EXPECT_NE(r.out.find("176 (+76%)"), std::string::npos);
  EXPECT_NE(r.out.find("752 (-6%)"), std::string::npos);
}

TEST_F(CliTest, Table1Json) {
  const auto r = run({"scenario", "--name", "table1", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["uniform"]["total_cents"], 800.0);
  EXPECT_EQ(j["revenue_change_pct_truncated"][0], -17);
}

TEST_F(CliTest, VerifyReportsSmallDeviations) {
  const auto r = run({"verify", "--trials", "100", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_LE(j["max_price_deviation"].get<double>(), 1e-4);
  EXPECT_LE(j["max_response_deviation"].get<double>(), 1e-3);
  EXPECT_EQ(j["seed"], 7);
  EXPECT_TRUE(j["passed"].get<bool>());
}

TEST_F(CliTest, SolveWritesJson) {
  const auto out = path("solve.json");
  ASSERT_EQ(run({"solve", "--config", kData + "/minimal.json", "--out", out}).code, 0);
  const auto j = nlohmann::json::parse(slurp(out));
  EXPECT_NEAR(j["outcome"]["prices"][0].get<double>(), 12.0376, 1e-4);
  EXPECT_EQ(j["lambda_tuned"], false);
}

TEST_F(CliTest, SolveWithTuning) {
  const auto out = path("tuned.json");
  const auto r = run({"solve", "--config", kData + "/case6_lambda3000.json", "--tune-lambda",
                      "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(out));
  EXPECT_LE(j["outcome"]["budget_used"].get<double>(), 380.0 + 1e-6);
}

TEST_F(CliTest, SolveCsv) {
  const auto r = run({"solve", "--config", kData + "/case1.json"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("user,price_cents_per_kwh,energy_kwh,utility_cents,clamp_flag\n", 0), 0u);
}

TEST_F(CliTest, ValidationErrorExitsOne) {
  const auto r = run({"solve", "--config", kData + "/missing_alpha.json"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("users[1].alpha"), std::string::npos);
  EXPECT_EQ(run({"solve", "--config", path("nope.json")}).code, 1);
}

TEST_F(CliTest, InfeasibilityExitsTwo) {
  std::ofstream(path("tight.json")) << R"({"params": {"C": 15},
    "users": [{"E": 150, "alpha": 2}, {"E": 150, "alpha": 3}], "tune_lambda": true})";
  const auto r = run({"solve", "--config", path("tight.json")});
  EXPECT_EQ(r.code, 2) << r.err;
}

TEST_F(CliTest, SweepCsv) {
  const auto out = path("sweep.csv");
  ASSERT_EQ(run({"sweep", "--axis", "alpha", "--range", "1:3:1", "--config",
                 kData + "/minimal.json", "--out", out})
                .code,
            0);
  EXPECT_EQ(slurp(out),
            "axis_value,price_cents_per_kwh,clamp_flag\n"
            "1.0000,10.0000,lower\n"
            "2.0000,12.0376,interior\n"
            "3.0000,17.1913,interior\n");
  EXPECT_EQ(run({"sweep", "--axis", "beta", "--range", "1:3:1", "--config",
                 kData + "/minimal.json"})
                .code,
            1);
  EXPECT_EQ(run({"sweep", "--axis", "alpha", "--range", "1:3", "--config",
                 kData + "/minimal.json"})
                .code,
            1);
}

TEST_F(CliTest, Fig5Scenario) {
  const auto r = run({"scenario", "--name", "fig5", "--axis", "energy"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("50.0000,23.6625,interior"), std::string::npos) << r.out;
}

TEST_F(CliTest, CasemixSixAtLambda3000) {
  const auto r = run({"scenario", "--name", "casemix", "--case", "6", "--lambda", "3000"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(",0.00\n"), std::string::npos) << r.out;
  EXPECT_EQ(run({"scenario", "--name", "casemix", "--case", "9"}).code, 1);
  EXPECT_EQ(run({"scenario", "--name", "fig9"}).code, 1);
}

TEST_F(CliTest, CompareEdsJson) {
  const auto out = path("cmp.json");
  ASSERT_EQ(run({"compare-eds", "--config", kData + "/case1.json", "--out", out}).code, 0);
  const auto j = nlohmann::json::parse(slurp(out));
  EXPECT_EQ(j[0]["case"], "case-1");
  EXPECT_GT(j[0]["percent_reduction"].get<double>(), 0.0);
}

TEST_F(CliTest, IdenticalRunsAreByteIdentical) {
  const auto a = path("a.csv");
  const auto b = path("b.csv");
  ASSERT_EQ(run({"scenario", "--name", "casemix", "--case", "3", "--out", a}).code, 0);
  ASSERT_EQ(run({"scenario", "--name", "casemix", "--case", "3", "--out", b}).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());

  const auto s1 = path("s1.json");
  const auto s2 = path("s2.json");
  ASSERT_EQ(run({"compare-eds", "--config", kData + "/sampled.json", "--out", s1}).code, 0);
  ASSERT_EQ(run({"compare-eds", "--config", kData + "/sampled.json", "--out", s2}).code, 0);
  EXPECT_EQ(slurp(s1), slurp(s2));
}

}  // namespace
}  // namespace dpricing
