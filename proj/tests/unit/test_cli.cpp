#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ncspectral/error.hpp"
#include "ncspectral_cli/cli.hpp"

using namespace ncspectral;
using namespace ncspectral::cli;

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("ncspectral_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "ncspectral");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  testing::internal::CaptureStdout();
  testing::internal::CaptureStderr();
  const int code = run_main(static_cast<int>(argv.size()), argv.data());
  testing::internal::GetCapturedStdout();
  testing::internal::GetCapturedStderr();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, RoundTrip) {
  RunConfig c;
  c.torus = {4, "jarnik:power:3", {}};
  c.one_form = {{0, {0, 1, 0, 0}, 0.3, -0.1}, {2, {1, 1, 0, 0}, 0.0, 0.25}};
  c.zeta.P = "k1^2*k2^2";
  c.zeta.twist = {0.5, 0, 0, 0.25};
  c.dio.target = {"golden", "sqrt2"};
  c.dio.qmax = 123456;
  c.action.lambdas = {6, 8, 10, 12, 16, 20, 24};
  c.action.families = {"golden"};
  c.op.suites = {"square"};
  c.tolerances.op = 1e-12;
  c.seed = 99;
  c.threads = 3;
  c.output = "somewhere";
  EXPECT_EQ(RunConfig::from_json(c.to_json()), c);
  EXPECT_EQ(RunConfig::from_json(nlohmann::json::parse(c.to_json().dump())), c);
  EXPECT_EQ(RunConfig::from_json(RunConfig{}.to_json()), RunConfig{});
  RunConfig m;
  m.torus.matrix = {0, 1, -1, 0};
  m.torus.theta = "matrix";
  EXPECT_EQ(RunConfig::from_json(m.to_json()), m);
}

TEST(Config, RejectsMalformed) {
  EXPECT_THROW(RunConfig::from_json({{"bogus", 1}}), Error);
  EXPECT_THROW(RunConfig::from_json({{"torus", {{"n", "two"}}}}), Error);
  EXPECT_THROW(RunConfig::from_json(nlohmann::json::array()), Error);
  EXPECT_THROW(parse_mode("0:1,2"), Error);
  const auto m = parse_mode("1:0,-2:0.5,0.25");
  EXPECT_EQ(m.axis, 1);
  EXPECT_EQ(m.k, (std::vector<std::int64_t>{0, -2}));
  EXPECT_EQ(m.im, 0.25);
}

TEST(Config, ThetaPresets) {
  TorusSpec t{2, "rational:1/3", {}};
  EXPECT_NEAR(resolve_theta(t)(0, 1), 2 * kPi / 3, 1e-15);
  t.theta = "golden";
  EXPECT_NEAR(resolve_theta(t)(0, 1), kPi * (std::sqrt(5.0) - 1), 1e-14);
  t.theta = "jarnik:power:4";
  EXPECT_NEAR(resolve_theta(t)(0, 1) / (2 * kPi), 611.0 / 1344.0, 1e-6);
  t.theta = "nonsense";
  EXPECT_THROW(resolve_theta(t), Error);
  t = {4, "rational:1/2", {}};
  const auto th = resolve_theta(t);
  EXPECT_NEAR(th(0, 1), kPi, 1e-15);
  EXPECT_EQ(th(2, 3), 0.0);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("codes");
  EXPECT_EQ(run({}), kExitUnknownCommand);
  EXPECT_EQ(run({"frobnicate"}), kExitUnknownCommand);
  std::ofstream(dir / "empty.json").close();
  EXPECT_EQ(run({"--config", (dir / "empty.json").string(), "zeta", "eval"}), kExitBadConfig);
  EXPECT_EQ(run({"--config", (dir / "missing.json").string(), "zeta", "eval"}), kExitBadConfig);
  EXPECT_EQ(run({"zeta", "eval", "--n", "2", "--s", "2", "--out", (dir / "a").string()}), kExitPrecondition);
  EXPECT_EQ(run({"op", "check", "--all", "--n", "2", "--out", (dir / "b").string()}), kExitOk);
  EXPECT_EQ(run({"op", "check", "--suite", "square", "--tolerance", "1e-30", "--out", (dir / "c").string()}),
            kExitCheckFailed);
}

TEST(Cli, ResidueRowAndSummary) {
  const auto dir = scratch("residue");
  ASSERT_EQ(run({"zeta", "residue", "--n", "4", "--P", "k1^2*k2^2", "--shift", "6", "--out", dir.string()}), 0);
  const auto csv = slurp(dir / "results.csv");
  EXPECT_NE(csv.find("4,k1^2*k2^2,6,2,0.8224670334241"), std::string::npos) << csv;
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(summary["command"], "zeta residue");
  EXPECT_EQ(summary["version"], version());
  EXPECT_EQ(RunConfig::from_json(summary["config"]).torus.n, 4);
  EXPECT_NEAR(summary["results"]["residue"]["re"].get<double>(), kPi * kPi / 12, 1e-13);
}

TEST(Cli, DeterministicCsv) {
  const auto dir = scratch("det");
  const auto cfg = dir / "cfg.json";
  RunConfig c;
  c.torus.n = 2;
  c.action.families = {"rational:1/3", "golden"};
  c.output = (dir / "one").string();
  std::ofstream(cfg) << c.to_json().dump();
  ASSERT_EQ(run({"--config", cfg.string(), "action", "correction"}), 0);
  ASSERT_EQ(run({"--config", cfg.string(), "action", "correction", "--out", (dir / "two").string(),
                 "--threads", "2"}),
            0);
  EXPECT_EQ(slurp(dir / "one" / "results.csv"), slurp(dir / "two" / "results.csv"));
  EXPECT_FALSE(slurp(dir / "one" / "results.csv").empty());
}

TEST(Cli, ConstantTermCheck) {
  const auto dir = scratch("ct");
  EXPECT_EQ(run({"action", "constant-term", "--n", "4", "--mode", "0:0,1,0,0:0.3", "--check", "--out",
                 dir.string()}),
            0);
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  EXPECT_LT(summary["results"]["deviation"].get<double>(), 1e-8);
}

TEST(Cli, FormatDouble) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(to_csv({{"a", "b"}, {{"1", "x,y"}}, {}, false}), "a,b\n1,\"x,y\"\n");
}
