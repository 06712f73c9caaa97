// SPDX-License-Identifier: Apache-2.0
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "sntail/cli/commands.hpp"
#include "sntail/cli/config.hpp"
#include "sntail/cli/emit.hpp"
#include "sntail/cli/ledger.hpp"

using namespace sntail::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sntail_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ToolRun {
  int code = -1;
  std::string out;
};

ToolRun run_tool(const std::string& args) {
  const fs::path out = scratch("stdout.txt");
  const std::string cmd = std::string(SNTAIL_TOOL_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

ExperimentConfig parse_ok(const std::vector<std::string>& args) {
  const ParseResult r = parse_arguments(args);
  EXPECT_TRUE(r.config.has_value()) << (r.errors.empty() ? "" : r.errors.front());
  return r.config.value_or(ExperimentConfig{});
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Parse, PredictDefaults) {
  const auto c = parse_ok({"predict", "--n", "3", "--eps", "0.1", "--variant", "corrected", "--model", "iid-normal"});
  EXPECT_EQ(c.command, Command::predict);
  EXPECT_EQ(c.n, 3);
  EXPECT_EQ(c.side, SideChoice::right);
  EXPECT_EQ(c.beta, 2.0);
  EXPECT_EQ(c.variant, VariantChoice::corrected);
  EXPECT_EQ(c.eps.values(), std::vector<double>{0.1});
}

TEST(Parse, ScientificTrials) {
  const auto c = parse_ok({"mc", "--n", "3", "--eps", "0.3", "--trials", "1e7", "--seed", "42", "--workers", "8"});
  EXPECT_EQ(c.trials, 10000000u);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.workers, 8);
  EXPECT_FALSE(parse_arguments({"mc", "--trials", "1234.5"}).config);
}

TEST(Parse, EpsGrid) {
  const auto c = parse_ok({"oracle", "--eps", "1e-2:1e-5:geometric:7"});
  const auto v = c.eps.values();
  ASSERT_EQ(v.size(), 7u);
  EXPECT_DOUBLE_EQ(v.front(), 1e-2);
  EXPECT_DOUBLE_EQ(v.back(), 1e-5);
  EXPECT_NEAR(v[1], 1e-2 * std::pow(10.0, -0.5), 1e-16);
  EXPECT_FALSE(parse_arguments({"oracle", "--eps", "1e-2:1e-5:cubic:7"}).config);
}

TEST(Parse, RejectsSmallN) {
  const ParseResult r = parse_arguments({"predict", "--n", "1"});
  EXPECT_FALSE(r.config);
  EXPECT_EQ(r.code, ExitCode::usage);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0], "n must be >= 2");
}

TEST(Parse, ListsEveryViolation) {
  const ParseResult r =
      parse_arguments({"frobnicate", "--n", "1", "--beta", "1", "--side", "up", "--trials", "10", "--colour", "red"});
  EXPECT_EQ(r.code, ExitCode::usage);
  EXPECT_GE(r.errors.size(), 6u);
}

TEST(Parse, ConfigFileAndOverride) {
  const fs::path ini = scratch("override.ini");
  std::ofstream(ini) << "command=predict\nn=4\nbeta=3\neps=0.05\n";
  const auto c = parse_ok({"--config", ini.string(), "--n", "6"});
  EXPECT_EQ(c.command, Command::predict);
  EXPECT_EQ(c.n, 6);
  EXPECT_EQ(c.beta, 3.0);
  // The positional command on the command line wins as well.
  EXPECT_EQ(parse_ok({"mc", "--config", ini.string()}).command, Command::mc);
}

TEST(Parse, UnknownConfigKeyRejected) {
  const fs::path ini = scratch("unknown.ini");
  std::ofstream(ini) << "command=predict\nn=4\nepsilon=0.05\nalpha=2\n";
  const ParseResult r = parse_arguments({"--config", ini.string()});
  EXPECT_FALSE(r.config);
  EXPECT_EQ(r.code, ExitCode::usage);
  EXPECT_EQ(r.errors.size(), 2u);
}

TEST(Parse, MissingConfigIsIoError) {
  EXPECT_EQ(parse_arguments({"predict", "--config", "/nonexistent/sntail.ini"}).code, ExitCode::io);
}

TEST(Parse, GaussianNeedsMatchingCovariance) {
  EXPECT_FALSE(parse_arguments({"predict", "--model", "gaussian", "--n", "2", "--cov", "1,0.5,0.5"}).config);
  const auto c = parse_ok({"predict", "--model", "gaussian", "--n", "2", "--cov", "1,0.5,0.5,1"});
  EXPECT_EQ(c.mean, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(c.cov.size(), 4u);
}

TEST(Config, RoundTripThroughIni) {
  std::vector<ExperimentConfig> configs;
  configs.push_back(parse_ok({"predict", "--n", "3", "--eps", "0.1"}));
  configs.push_back(parse_ok({"mc", "--n", "4", "--eps", "1e-2:1e-5:geometric:7", "--trials", "1e7", "--seed",
                              "18446744073709551615", "--model", "iid-folded-normal", "--shift", "0.1",
                              "--stat", "max-zk", "--format", "json", "--output", "/tmp/x y.json"}));
  configs.push_back(parse_ok({"bounds", "--model", "gaussian", "--n", "2", "--cov", "1,0.3,0.3,2", "--mean",
                              "0.1,-0.2", "--beta", "2.5", "--eps", "0.01:0.05:linear:3", "--gamma", "1.5"}));
  configs.push_back(parse_ok({"verify", "--model", "iid-student-t", "--nu", "3.3333333333333335", "--side",
                              "two-sided", "--variant", "paper", "--oracle", "region", "--integrand", "paper"}));
  for (const auto& c : configs) {
    const fs::path ini = scratch("roundtrip.ini");
    save_config(c, ini.string());
    const auto back = parse_ok({"--config", ini.string()});
    EXPECT_EQ(back, c) << to_ini(c) << "---\n" << to_ini(back);
    EXPECT_EQ(config_hash(back), config_hash(c));
  }
}

TEST(Config, HashIgnoresPresentation) {
  const auto a = parse_ok({"mc", "--n", "3", "--workers", "1"});
  const auto b = parse_ok({"mc", "--n", "3", "--workers", "8", "--format", "json", "--output", "x.json"});
  const auto d = parse_ok({"mc", "--n", "3", "--seed", "2"});
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_NE(config_hash(a), config_hash(d));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Emit, TwelveSignificantDigits) {
  EXPECT_EQ(format_double(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(1.23456789012345e-7), "1.23456789012e-07");
}

TEST(Emit, PredictCsvSchema) {
  const auto c = parse_ok({"predict", "--n", "2", "--eps", "0.01"});
  std::ostringstream out;
  write_csv(out, c, run_command(c));
  const auto ls = lines(out.str());
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_EQ(ls[0].rfind("# tool=sntail version=", 0), 0u);
  EXPECT_NE(ls[0].find("config_hash=" + config_hash(c)), std::string::npos);
  EXPECT_NE(ls[0].find("seed=1"), std::string::npos);
  EXPECT_EQ(ls[1], "n,beta,eps,side,variant,K,h,constant,exponent,value");
  EXPECT_EQ(ls[3], "2,2,0.01,right,corrected,4.75682846001,0.0795774715459,0.378536381425,0.5,0.0378536381425");
}

TEST(Emit, McJsonKeys) {
  const auto c = parse_ok({"mc", "--n", "3", "--eps", "0.3", "--trials", "20000", "--seed", "42", "--format", "json"});
  std::ostringstream out;
  write_json(out, c, run_command(c));
  const auto doc = nlohmann::json::parse(out.str());
  EXPECT_EQ(doc["tool"], "sntail");
  EXPECT_EQ(doc["seed"], 42);
  EXPECT_EQ(doc["config_hash"], config_hash(c));
  const auto& rec = doc["results"][0];
  for (const char* key : {"hits", "trials", "p_hat", "ci_low", "ci_high", "seed"}) EXPECT_TRUE(rec.contains(key)) << key;
  EXPECT_EQ(rec["trials"], 20000);
}

TEST(Ledger, StatusRules) {
  const auto d = make_entry("det", 1.0 / 3.0, 1.0 / 9.0, 1.0 / 9.0, 1e-10);
  EXPECT_EQ(d.status, Status::discrepant);
  EXPECT_DOUBLE_EQ(*d.paper_ratio(), 3.0);
  EXPECT_EQ(make_entry("x", 2.0, std::nullopt, 2.0 * (1 + 1e-12), 1e-10).status, Status::confirmed);
  EXPECT_EQ(make_entry("x", 2.0, std::nullopt, std::nullopt, 1e-10).status, Status::untested);
  const Table t = ledger_table({d});
  EXPECT_EQ(t.columns[6], "status");
}

TEST(Verify, ThreeDimensionalNormalLedger) {
  const auto c = parse_ok({"verify", "--n", "3", "--trials", "20000"});
  const Report r = run_verify(c);
  EXPECT_EQ(r.code, ExitCode::ok);
  const auto& det = r.table.rows[0];
  EXPECT_EQ(std::get<std::string>(det[6]), "discrepant");
  EXPECT_NEAR(std::get<double>(det[1]), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(std::get<double>(det[3]), 1.0 / 9.0, 1e-15);
  bool constant_seen = false;
  for (const auto& row : r.table.rows) {
    if (std::get<std::string>(row[0]).rfind("leading constant", 0) == 0) {
      constant_seen = true;
      EXPECT_NEAR(std::get<double>(row[2]), 0.288675134595, 1e-9);
      EXPECT_NEAR(std::get<double>(row[3]), 0.288675134595, 1e-6);
    }
  }
  EXPECT_TRUE(constant_seen);
}

TEST(Verify, RademacherAtom) {
  const auto c = parse_ok({"verify", "--n", "3", "--model", "rademacher", "--eps", "0.2", "--trials", "1e5"});
  const Report r = run_verify(c);
  const auto& atom = r.table.rows[3];
  EXPECT_EQ(std::get<double>(atom[1]), 0.125);
  EXPECT_EQ(std::get<double>(atom[3]), 0.125);
  EXPECT_EQ(std::get<std::string>(atom[6]), "confirmed");
}

TEST(ExitCodes, Exhaustive) {
  EXPECT_EQ(run_tool("predict --n 3 --eps 0.1").code, 0);
  EXPECT_EQ(run_tool("verify --n 2 --trials 1e4").code, 0);
  EXPECT_EQ(run_tool("--help").code, 0);
  EXPECT_EQ(run_tool("predict --n 1").code, 2);
  EXPECT_EQ(run_tool("").code, 2);
  EXPECT_EQ(run_tool("predict --unknown 1").code, 2);
  EXPECT_EQ(run_tool("predict --model rademacher").code, 2);         // no density
  EXPECT_EQ(run_tool("oracle --n 5 --oracle region").code, 2);       // region oracle limited to n <= 4
  EXPECT_EQ(run_tool("predict --config /nonexistent/x.ini").code, 3);
  EXPECT_EQ(run_tool("predict --output /nonexistent/dir/out.csv").code, 3);
  EXPECT_EQ(run_tool("predict --save-config /nonexistent/dir/c.ini").code, 3);

  // The verification-failure path: a report flagged by an oracle disagreement.
  const auto c = parse_ok({"constants", "--output", scratch("flagged.csv").string()});
  Report flagged = run_command(c);
  flagged.code = ExitCode::verification_failure;
  EXPECT_EQ(finish(c, flagged), 1);
}

TEST(Replay, SavedConfigReproducesOutput) {
  const fs::path ini = scratch("replay.ini");
  const ToolRun first = run_tool("mc --n 3 --eps 0.3 --trials 1e5 --seed 9 --workers 1 --save-config " + ini.string());
  ASSERT_EQ(first.code, 0);
  const ToolRun again = run_tool("--config " + ini.string() + " --workers 4");
  EXPECT_EQ(again.code, 0);
  EXPECT_EQ(first.out, again.out);
}
