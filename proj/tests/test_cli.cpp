#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace fs = std::filesystem;
using gaussmart::cli::execute;
using gaussmart::cli::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = execute(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gaussmart_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({"simulate", "--bogus", "1"}).code, 2);
  EXPECT_EQ(run({"simulate", "--grid", "1:2:4", "--out", path("x.csv")}).code, 2);
  EXPECT_EQ(run({"simulate", "--grid", "0:2", "--out", path("x.csv")}).code, 2);
  EXPECT_EQ(run({"simulate", "--grid", "0:1:4"}).code, 2);  // no --out
  EXPECT_EQ(run({"simulate", "--family", "weibull", "--out", path("x.csv")}).code, 2);
  EXPECT_EQ(run({"simulate", "--family", "gamma", "--b", "-1", "--out", path("x.csv")}).code, 2);
  EXPECT_EQ(run({"simulate", "--mode", "event", "--family", "gamma", "--out", path("x.csv")}).code, 2);
  EXPECT_EQ(run({"generator-check", "--family", "compound", "--beta", "0.5", "--atoms", "1:1"}).code, 2);
  EXPECT_EQ(run({"generator-check", "--s", "0.5", "--h", "1"}).code, 2);
  const auto r = run({"kernel", "--s", "2", "--t", "1", "--out", path("k.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("0 <= s < t"), std::string::npos);
}

TEST_F(Cli, HelpIsSuccess) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("simulate"), std::string::npos);
  EXPECT_EQ(run({"generator-check", "--help"}).code, 0);
}

TEST_F(Cli, SimulateGridIsDeterministicAcrossThreads) {
  const std::vector<std::string> base = {"simulate", "--family", "gamma", "--paths", "50", "--grid", "0:2:8", "--seed", "4"};
  auto a = base;
  a.insert(a.end(), {"--threads", "1", "--out", path("a.csv")});
  auto b = base;
  b.insert(b.end(), {"--threads", "3", "--out", path("b.csv")});
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  const auto text = slurp(path("a.csv"));
  EXPECT_EQ(text, slurp(path("b.csv")));
  EXPECT_EQ(text.rfind("path_id,time,value\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 50 * 9);
}

TEST_F(Cli, SimulateEventMode) {
  ASSERT_EQ(run({"simulate", "--mode", "event", "--paths", "20", "--s0", "1", "--x0", "0.5", "--horizon", "3",
                 "--out", path("e.csv")})
                .code,
            0);
  const auto text = slurp(path("e.csv"));
  EXPECT_EQ(text.rfind("path_id,event_index,time,pre_value,post_value\n", 0), 0u);
}

TEST_F(Cli, KernelSidecar) {
  ASSERT_EQ(run({"kernel", "--family", "poisson", "--s", "0.5", "--t", "2", "--x", "1", "--out", path("k.csv")}).code, 0);
  const auto side = json::parse(slurp(path("k.csv.json")));
  EXPECT_EQ(side["schema"], "gaussmart/1");
  EXPECT_NEAR(side["atom_weight"].get<double>(), std::pow(2.0, -2.541494082536798), 1e-12);
  EXPECT_LT(side["mass_check"]["abs_error"].get<double>(), 1e-8);
  EXPECT_LT(side["moment_checks"]["second_moment"]["abs_error"].get<double>(), 1e-8);
  EXPECT_NEAR(side["moment_checks"]["second_moment"]["expected"].get<double>(), 2.656774190986868, 1e-12);
  EXPECT_EQ(slurp(path("k.csv")).rfind("y,density\n", 0), 0u);
}

TEST_F(Cli, GeneratorCheck) {
  const auto r = run({"generator-check", "--family", "poisson", "--f", "x3", "--out", path("g.json")});
  EXPECT_EQ(r.code, 0);
  const auto doc = json::parse(slurp(path("g.json")));
  const auto& res = doc["results"][0];
  EXPECT_NEAR(res["closed_form"].get<double>(), 1.43184, 1e-4);
  EXPECT_LT(res["relative_error"].get<double>(), 0.01);
  EXPECT_TRUE(res["passed"].get<bool>());
}

TEST_F(Cli, VerifyReportAndConfigOverride) {
  {
    std::ofstream cfg(path("cfg.json"));
    cfg << R"({"family": {"kind": "gamma", "b": 2.0}, "seed": 5, "paths": 1000000})";
  }
  // The flag wins over the file's paths value.
  const auto r = run({"verify", "--config", path("cfg.json"), "--paths", "20000", "--report", path("r.json")});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  const auto doc = json::parse(slurp(path("r.json")));
  EXPECT_EQ(doc["schema"], "gaussmart/1");
  EXPECT_EQ(doc["family"]["kind"], "gamma");
  EXPECT_DOUBLE_EQ(doc["family"]["b"].get<double>(), 2.0);
  EXPECT_EQ(doc["seed"], 5);
  EXPECT_TRUE(doc["all_gated_passed"].get<bool>());
  EXPECT_EQ(doc["reports"][0]["n_samples"], 20000);
  for (const auto& rep : doc["reports"]) {
    EXPECT_TRUE(rep.contains("p_value"));
    EXPECT_TRUE(rep.contains("outcome"));
  }
}

TEST_F(Cli, ConfigRejectsUnknownKeys) {
  {
    std::ofstream cfg(path("bad.json"));
    cfg << R"({"family": {"kind": "poisson", "lambda": 3}})";
  }
  {
    std::ofstream cfg(path("broken.json"));
    cfg << "{ not json";
  }
  EXPECT_EQ(run({"verify", "--config", path("bad.json")}).code, 2);
  EXPECT_EQ(run({"verify", "--config", path("broken.json")}).code, 2);
  EXPECT_EQ(run({"verify", "--config", path("missing.json")}).code, 2);
}

TEST_F(Cli, ReportsAreByteIdentical) {
  ASSERT_EQ(run({"verify", "--paths", "5000", "--threads", "1", "--report", path("a.json")}).code, 0);
  ASSERT_EQ(run({"verify", "--paths", "5000", "--threads", "2", "--report", path("b.json")}).code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
}

TEST_F(Cli, JumpTimes) {
  const auto r = run({"jump-times", "--paths", "20000", "--out", path("j.csv")});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS jump_times"), std::string::npos);
  EXPECT_EQ(slurp(path("j.csv")).rfind("path_id,first_jump_time\n", 0), 0u);
  EXPECT_EQ(run({"jump-times", "--family", "gamma"}).code, 2);
}

TEST_F(Cli, CompoundFamilyFromConfigAtoms) {
  {
    std::ofstream cfg(path("c.json"));
    cfg << R"({"family": {"kind": "compound", "beta": 0.0, "atoms": [[0.5, 1.0], [2.0, 0.3]]}})";
  }
  ASSERT_EQ(run({"generator-check", "--config", path("c.json"), "--f", "x2", "--out", path("g.json")}).code, 0);
  const auto doc = json::parse(slurp(path("g.json")));
  EXPECT_FALSE(doc["results"][0]["gated"].get<bool>());
  EXPECT_EQ(doc["results"][0]["family"]["kind"], "compound");
}
