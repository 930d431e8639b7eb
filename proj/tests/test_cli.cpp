#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "support/run_command.hpp"

#ifndef POA_PRICING_BIN
#error "POA_PRICING_BIN must point at the poa-pricing executable"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using poa::testing::slurp;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("poa_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  poa::testing::CommandResult run(const std::string& args) {
    return poa::testing::run_command(POA_PRICING_BIN, args, dir_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& body) const {
    std::ofstream(dir_ / name) << body;
    return path(name);
  }

  fs::path dir_;
};

TEST_F(Cli, ValidateAcceptsSymmetricInstance) {
  const auto in = write("pair.json", R"({"n": 2, "a": [1, 1], "b": [[-1, 0.5], [0.5, -1]]})");
  const auto r = run("validate --input " + in);
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("mu=0.5"), std::string::npos) << r.out;
}

TEST_F(Cli, ValidateReportsViolations) {
  auto in = write("pos.json", R"({"n": 2, "a": [1, 1], "b": [[-1, 0.1], [0.1, 0.5]]})");
  auto r = run("validate --input " + in);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("NonNegativeOwnEffect at i=1"), std::string::npos) << r.err;

  in = write("dom.json", R"({"n": 2, "a": [1, 1], "b": [[-1, 1], [1, -1]]})");
  r = run("validate --input " + in);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("DominanceViolated"), std::string::npos) << r.err;
}

TEST_F(Cli, IoFailuresExitOne) {
  EXPECT_EQ(run("validate --input " + path("missing.json")).exit_code, 1);
  const auto bad = write("bad.json", "{not json");
  EXPECT_EQ(run("validate --input " + bad).exit_code, 1);
  const auto schema = write("schema.json", R"({"n": 2, "a": [1, 1]})");
  EXPECT_EQ(run("validate --input " + schema).exit_code, 1);
}

TEST_F(Cli, UnknownFlagExitsTwo) { EXPECT_EQ(run("curve --bogus 1").exit_code, 2); }

TEST_F(Cli, AnalyzePair) {
  ASSERT_EQ(run("generate --model symmetric --n 2 --rho 0.5 --output " + path("pair.json")).exit_code, 0);
  const json ref = json::parse(slurp(path("pair.reference.json")));
  EXPECT_NEAR(ref["poa"].get<double>(), 8.0 / 9.0, 1e-12);

  const auto r = run("analyze --input " + path("pair.json") + " --output " + path("out.json") + " --verify");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json doc = json::parse(slurp(path("out.json")));
  EXPECT_NEAR(doc["poa"]["poa_of_a"].get<double>(), 8.0 / 9.0, 1e-9);
  EXPECT_NEAR(doc["poa"]["poa_min"].get<double>(), 8.0 / 9.0, 1e-9);
  EXPECT_NEAR(doc["poa"]["mu_bound"].get<double>(), 8.0 / 9.0, 1e-12);
  ASSERT_EQ(doc["oracles"].size(), 3u);
  for (const auto& o : doc["oracles"]) EXPECT_TRUE(o["passed"].get<bool>()) << o.dump();
}

TEST_F(Cli, AnalyzeStarAndDiagonal) {
  ASSERT_EQ(run("generate --model star --n 5 --rho 0.15 --output " + path("star.json")).exit_code, 0);
  ASSERT_EQ(run("analyze --input " + path("star.json") + " --output " + path("star_out.json")).exit_code, 0);
  const json star = json::parse(slurp(path("star_out.json")));
  EXPECT_NEAR(star["poa"]["exact_poa_min"].get<double>(), 0.969, 1e-3);
  EXPECT_NEAR(star["poa"]["mu_bound"].get<double>(), 0.816, 1e-3);

  const auto diag = write("diag.json", R"({"n": 3, "a": [1, 2, 3], "b": [[-1, 0, 0], [0, -2, 0], [0, 0, -0.5]]})");
  ASSERT_EQ(run("analyze --input " + diag + " --output " + path("diag_out.json")).exit_code, 0);
  const json d = json::parse(slurp(path("diag_out.json")));
  for (const char* key : {"poa_of_a", "poa_min", "poa_max", "mu_bound", "exact_poa_min"}) {
    EXPECT_DOUBLE_EQ(d["poa"][key].get<double>(), 1.0) << key;
  }
}

TEST_F(Cli, AnalyzeCsvAndIntercept) {
  ASSERT_EQ(run("generate --model symmetric --n 3 --rho 0.2 --output " + path("s.json")).exit_code, 0);
  const auto icpt = write("a.json", R"({"a": [1, 0, 0]})");
  const auto r = run("analyze --input " + path("s.json") + " --intercept " + icpt + " --format csv --output " +
                     path("out.csv"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const std::string csv = slurp(path("out.csv"));
  EXPECT_EQ(csv.rfind("field,value\n", 0), 0u);
  EXPECT_NE(csv.find("\na[0],1\na[1],0\n"), std::string::npos);

  const auto zero = write("zero.json", "[0, 0, 0]");
  const auto z = run("analyze --input " + path("s.json") + " --intercept " + zero + " --output " + path("z.json"));
  EXPECT_EQ(z.exit_code, 2);
  EXPECT_NE(z.err.find("ZeroIntercept"), std::string::npos);
}

TEST_F(Cli, VerifyRandomInstance) {
  ASSERT_EQ(run("generate --model random --n 6 --mu 0.9 --signs mixed --seed 3 --output " + path("r.json")).exit_code,
            0);
  EXPECT_EQ(run("verify --input " + path("r.json") + " --samples 200").exit_code, 0);
  EXPECT_EQ(run("verify --input " + path("r.json") + " --samples 0").exit_code, 2);
}

TEST_F(Cli, Curve) {
  ASSERT_EQ(run("curve --mu-min 0 --mu-max 0.9 --steps 10 --output " + path("c.csv")).exit_code, 0);
  const std::string csv = slurp(path("c.csv"));
  EXPECT_EQ(csv.rfind("mu,bound\n0,1\n", 0), 0u);
  EXPECT_NE(csv.find("\n0.5,0.8888888888888888\n"), std::string::npos);
  EXPECT_EQ(run("curve --mu-min 0.5 --mu-max 0.2 --steps 10 --output " + path("c2.csv")).exit_code, 2);
  EXPECT_EQ(run("curve --mu-min 0 --mu-max 1 --steps 10 --output " + path("c3.csv")).exit_code, 2);
}

TEST_F(Cli, GenerateIsDeterministicAndRejectsBadSpecs) {
  const std::string flags = "generate --model random --n 6 --mu 0.7 --seed 42 --output ";
  ASSERT_EQ(run(flags + path("r1.json")).exit_code, 0);
  ASSERT_EQ(run(flags + path("r2.json")).exit_code, 0);
  EXPECT_EQ(slurp(path("r1.json")), slurp(path("r2.json")));
  EXPECT_EQ(run("generate --model star --n 5 --rho 0.3 --output " + path("bad.json")).exit_code, 2);
  EXPECT_EQ(run("generate --model symmetric --n 3 --rho 0.6 --output " + path("bad.json")).exit_code, 2);
}

TEST_F(Cli, SimulateBestResponse) {
  ASSERT_EQ(run("generate --model symmetric --n 2 --rho 0.5 --output " + path("pair.json")).exit_code, 0);
  const auto r = run("simulate --input " + path("pair.json") + " --dynamic br --eps 1e-10 --output " + path("t.csv"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("converged=true"), std::string::npos);
  EXPECT_NE(r.out.find("final=[0.66666666"), std::string::npos) << r.out;
  EXPECT_EQ(slurp(path("t.csv")).rfind("step,dist_to_ne,revenue,p_0,p_1\n", 0), 0u);
}

TEST_F(Cli, SimulateGradientAndLimits) {
  const auto diag = write("diag.json", R"({"n": 2, "a": [1, 1], "b": [[-1, 0], [0, -1]]})");
  auto r = run("simulate --input " + diag + " --dynamic gd --eta 0.25 --output " + path("t.csv"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("converged=true"), std::string::npos);

  r = run("simulate --input " + diag + " --dynamic gd --eta 0.6 --output " + path("t.csv"));
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("StepSizeTooLarge"), std::string::npos);
  EXPECT_NE(r.err.find("eta_max = 0.5"), std::string::npos) << r.err;

  ASSERT_EQ(run("generate --model symmetric --n 2 --rho 0.9 --output " + path("slow.json")).exit_code, 0);
  r = run("simulate --input " + path("slow.json") + " --dynamic br --max-iters 5 --output " + path("t.csv"));
  EXPECT_EQ(r.exit_code, 4);
  EXPECT_NE(r.out.find("converged=false"), std::string::npos);
}

TEST_F(Cli, SimulateRandomHighMu) {
  ASSERT_EQ(run("generate --model random --n 8 --mu 0.9 --signs mixed --seed 5 --output " + path("r.json")).exit_code,
            0);
  const auto r = run("simulate --input " + path("r.json") + " --dynamic br --max-iters 10000 --output " + path("t.csv"));
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("converged=true"), std::string::npos);
}

}  // namespace
