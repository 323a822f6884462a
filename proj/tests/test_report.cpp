#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "polydense/error.hpp"
#include "polydense/json_format.hpp"
#include "polydense/report.hpp"

using namespace polydense;
using nlohmann::json;

namespace {

RunConfig config_for(std::string command) {
  RunConfig c;
  c.command = std::move(command);
  return c;
}

}  // namespace

TEST(JsonFormat, DoublesRoundTripExactly) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  for (double x : {1.0 / 3.0, 2.887328099567673, 1e-300, 6.02214076e23}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
  nlohmann::ordered_json j;
  j["b"] = 1;
  j["a"] = 0.5;
  j["nan"] = std::nan("");
  j["list"] = {1, 2};
  const auto text = dump_json(j);
  EXPECT_EQ(text.back(), '\n');
  EXPECT_LT(text.find("\"b\""), text.find("\"a\""));
  EXPECT_NE(text.find("\"nan\": null"), std::string::npos);
  EXPECT_EQ(json::parse(text).at("a"), 0.5);
}

TEST(Report, DiagnoseReportCarriesConfigAndResults) {
  auto c = config_for("diagnose");
  c.sequence = "ap:1,0";
  c.N = 10'000;
  const auto outcome = execute(c);
  ASSERT_EQ(outcome.exit_code, kExitOk) << outcome.diagnostic;
  const auto j = json::parse(outcome.report);
  EXPECT_EQ(j.at("command"), "diagnose");
  EXPECT_EQ(j.at("config").at("seq"), "ap:1,0");
  EXPECT_FALSE(j.at("config").contains("workers"));
  EXPECT_TRUE(j.at("properties_hold"));
  EXPECT_EQ(j.at("result").at("factor_set").at("method"), "exact-ap");
  EXPECT_NEAR(j.at("result").at("diagnostics").at("weighted_pi_sum").get<double>(), 2.614372398462907, 1e-12);
}

TEST(Report, ReportsAreIdenticalAcrossWorkerCounts) {
  for (const char* command : {"factors", "diagnose", "construct", "witnesses"}) {
    auto c = config_for(command);
    c.sequence = "poly:1,1,0,1";
    c.N = 20'000;
    c.n_max = 300;
    c.alpha = 3;
    const auto one = execute(c);
    c.workers = 4;
    const auto four = execute(c);
    EXPECT_EQ(one.report, four.report) << command;
    EXPECT_EQ(one.exit_code, four.exit_code);
  }
}

TEST(Report, ExitCodes) {
  auto bad_seq = config_for("factors");
  bad_seq.sequence = "poly:1,x";
  const auto rejected = execute(bad_seq);
  EXPECT_EQ(rejected.exit_code, kExitPrecondition);
  EXPECT_TRUE(rejected.report.empty());
  EXPECT_NE(rejected.diagnostic.find("malformed"), std::string::npos);

  auto unknown = config_for("frobnicate");
  EXPECT_EQ(execute(unknown).exit_code, kExitPrecondition);

  auto alpha = config_for("diagnose");
  alpha.alpha = 0.5;
  EXPECT_EQ(execute(alpha).exit_code, kExitPrecondition);

  auto density = config_for("density");
  density.sequence = "zelinsky";
  density.range_lo = 2;
  density.range_hi = 100'000;
  const auto failed = execute(density);
  EXPECT_EQ(failed.exit_code, kExitOk);  // a failing density check is a result, not a broken property
  EXPECT_FALSE(json::parse(failed.report).at("result").at("holds"));

  auto io = config_for("sieve");
  io.N = 100;
  io.out_path = "/nonexistent-dir/report.json";
  std::ostringstream out, err;
  EXPECT_EQ(run(io, out, err), kExitIo);
  EXPECT_NE(err.str().find("cannot write"), std::string::npos);

  auto missing = config_for("factors");
  missing.sequence = "list:@/nonexistent/list.txt";
  EXPECT_EQ(execute(missing).exit_code, kExitIo);
}

TEST(Report, CsvOutputStartsWithConfigLine) {
  auto c = config_for("factors");
  c.sequence = "poly:1,0,1";
  c.exact = true;
  c.prime_bound = 30;
  c.format = OutputFormat::csv;
  const auto outcome = execute(c);
  ASSERT_EQ(outcome.exit_code, kExitOk);
  EXPECT_EQ(outcome.report.rfind("#! config {", 0), 0u);
  EXPECT_NE(outcome.report.find("prime,witness,method\n2,1,exact-polynomial\n5,2,exact-polynomial\n"),
            std::string::npos);
}

TEST(Report, ConfigFileMergesUnderCommandLine) {
  RunConfig base = config_for("density");
  base.alpha = 2;
  const json file = {{"alpha", 3.0}, {"K", 0.5}, {"range", "10:20"}, {"seq", "pow2"}};
  const auto merged = apply_config_json(base, file, {"alpha"});
  EXPECT_EQ(merged.alpha, 2.0);
  EXPECT_EQ(merged.K, 0.5);
  EXPECT_EQ(merged.range_lo, 10u);
  EXPECT_EQ(merged.range_hi, 20u);
  EXPECT_EQ(merged.sequence, "pow2");
  EXPECT_THROW(apply_config_json(base, json{{"colour", 1}}, {}), PreconditionError);
  EXPECT_THROW(apply_config_json(base, json{{"alpha", "x"}}, {}), PreconditionError);
  EXPECT_THROW(parse_range("5:2x"), PreconditionError);
  EXPECT_THROW(parse_format("xml"), PreconditionError);
}

TEST(Report, SieveLimitCapsEveryTable) {
  auto c = config_for("diagnose");
  c.N = 5000;
  c.sieve_limit = 1000;
  EXPECT_EQ(execute(c).exit_code, kExitPrecondition);
  ::setenv(kSieveLimitEnv, "12345", 1);
  EXPECT_EQ(default_sieve_limit(), 12345u);
  ::setenv(kSieveLimitEnv, "lots", 1);
  EXPECT_THROW(default_sieve_limit(), PreconditionError);
  ::unsetenv(kSieveLimitEnv);
  EXPECT_EQ(default_sieve_limit(), kDefaultSieveLimit);
}

TEST(Report, WritesToFile) {
  const auto path = std::filesystem::temp_directory_path() / "polydense_report_test.json";
  auto c = config_for("gapcheck");
  c.N = 1000;
  c.out_path = path.string();
  std::ostringstream out, err;
  ASSERT_EQ(run(c, out, err), kExitOk);
  EXPECT_TRUE(out.str().empty());
  std::ifstream in(path);
  const auto j = json::parse(in);
  EXPECT_TRUE(j.at("result").at("pass"));
  std::filesystem::remove(path);
}

TEST(Report, EveryCommandRuns) {
  for (const auto& command : known_commands()) {
    auto c = config_for(command);
    c.N = 2000;
    c.range_hi = 2000;
    c.n_max = 10;
    if (command == "construct") c.alpha = 3;
    const auto outcome = execute(c);
    EXPECT_EQ(outcome.exit_code, kExitOk) << command << ": " << outcome.diagnostic;
    c.format = OutputFormat::csv;
    EXPECT_EQ(execute(c).exit_code, kExitOk) << command;
  }
}
