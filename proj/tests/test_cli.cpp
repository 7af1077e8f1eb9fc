#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "json.hpp"

#include "digiprod/cli.hpp"

using namespace digiprod;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cfg(const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = run(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig make(Command c) {
  RunConfig cfg;
  cfg.command = c;
  return cfg;
}

}  // namespace

TEST(Cli, EvalJsonCarriesEveryField) {
  auto cfg = make(Command::eval);
  cfg.seed_spec = "base=2; exponent=count_digit_pow(-1,1); factors=1:1";
  cfg.terms = 100'000;
  const auto o = run_cfg(cfg);
  ASSERT_EQ(o.code, exit_ok) << o.err;
  const auto j = json::parse(o.out);
  for (const char* key : {"value_re", "value_im", "log_re", "log_im", "err_est", "terms", "method", "spec"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_NEAR(j["value_re"].get<double>(), std::sqrt(0.5), 1e-6);
  EXPECT_EQ(j["method"], "abel+extrapolation");
  EXPECT_EQ(j["terms"], 100'000);
}

TEST(Cli, EvalIsBitIdenticalAcrossThreadCounts) {
  auto cfg = make(Command::eval);
  cfg.seed_spec = "base=4; exponent=count_set_pow(-0.5+0.86602540378443865i,J=1|3); factors=1:0.5+0.86602540378443865i,3:0.5+0.86602540378443865i";
  cfg.terms = 2'000'000;
  cfg.threads = 1;
  const auto ref = run_cfg(cfg).out;
  for (unsigned t : {2u, 4u, 7u}) {
    cfg.threads = t;
    EXPECT_EQ(run_cfg(cfg).out, ref) << t;
  }
}

TEST(Cli, EvalMethodsAndFormats) {
  auto cfg = make(Command::eval);
  cfg.seed_spec = "base=3; exponent=digit_sum_pow(-1); factors=1:1";
  cfg.terms = 10'000;
  cfg.method = EvalMethod::naive;
  cfg.output = OutputFormat::csv;
  auto o = run_cfg(cfg);
  EXPECT_EQ(o.code, exit_ok);
  EXPECT_EQ(o.out.rfind("value_re,value_im,log_re,log_im,err_est,terms,method\n", 0), 0u);
  EXPECT_NE(o.out.find(",naive\n"), std::string::npos);
  cfg.method = EvalMethod::abel;
  cfg.output = OutputFormat::plain;
  o = run_cfg(cfg);
  EXPECT_NE(o.out.find("method abel\n"), std::string::npos);
}

TEST(Cli, DivergentSpecExitsThree) {
  auto cfg = make(Command::eval);
  cfg.seed_spec = "base=2; exponent=count_set_pow(-1,J=0|1); factors=1:1";
  const auto o = run_cfg(cfg);
  EXPECT_EQ(o.code, exit_divergent);
  EXPECT_TRUE(o.out.empty());
  EXPECT_NE(o.err.find("diverge"), std::string::npos);
}

TEST(Cli, BadSpecsExitTwo) {
  auto cfg = make(Command::eval);
  for (const char* spec : {"base=2; exponent=table(2); factors=1:1", "base=2; exponent=nope(1); factors=1",
                           "base=2; exponent=thue_morse", "base=3; exponent=count_digit_pow(1,7); factors=1"}) {
    cfg.seed_spec = spec;
    const auto o = run_cfg(cfg);
    EXPECT_EQ(o.code, exit_usage) << spec;
    EXPECT_NE(o.err.find("error:"), std::string::npos);
  }
  auto bad_terms = make(Command::verify);
  bad_terms.claim = "woods_robbins";
  bad_terms.terms = 0;
  EXPECT_EQ(run_cfg(bad_terms).code, exit_usage);
}

TEST(Cli, VerifyReport) {
  auto cfg = make(Command::verify);
  cfg.claim = "sum_of_digits_b6";
  cfg.terms = 1'000'000;
  auto o = run_cfg(cfg);
  ASSERT_EQ(o.code, exit_ok) << o.err;
  const auto j = json::parse(o.out);
  for (const char* key : {"name", "computed", "expected", "rel_err", "pass", "terms", "seconds", "tol", "err_est"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["pass"], true);
  EXPECT_NEAR(j["expected"].get<double>(), 1.0 / std::sqrt(6.0), 1e-16);

  cfg.claim = "z_digit_sum_b2_half";
  cfg.tol = 1e-12;
  cfg.output = OutputFormat::plain;
  o = run_cfg(cfg);
  EXPECT_EQ(o.code, exit_failed);
  EXPECT_EQ(o.out.rfind("FAIL", 0), 0u) << o.out;

  cfg.claim = "missing";
  EXPECT_EQ(run_cfg(cfg).code, exit_usage);
}

TEST(Cli, VerifyAllUnderTruncationExitsOne) {
  auto cfg = make(Command::verify_all);
  cfg.terms = 1000;
  const auto o = run_cfg(cfg);
  EXPECT_EQ(o.code, exit_failed);
  const auto j = json::parse(o.out);
  EXPECT_LT(j["passed"].get<int>(), j["total"].get<int>());
  EXPECT_GE(j["total"].get<int>(), 14);
}

TEST(Cli, SummatoryCsv) {
  auto cfg = make(Command::summatory);
  cfg.seed_spec = "base=2; exponent=thue_morse";
  cfg.terms = 1 << 20;
  const auto o = run_cfg(cfg);
  ASSERT_EQ(o.code, exit_ok) << o.err;
  std::istringstream in(o.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "N,re_F,im_F,abs_F,ratio");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    const auto comma = line.find(',');
    const double F = std::stod(line.substr(comma + 1));
    EXPECT_TRUE(F == 0.0 || F == 1.0 || F == -1.0) << line;
  }
  EXPECT_EQ(rows, 20);

  cfg.output = OutputFormat::json;
  const auto j = json::parse(run_cfg(cfg).out);
  EXPECT_EQ(j["alpha"], 0.5);
  EXPECT_EQ(j["bounded"], true);
  EXPECT_EQ(j["rows"].size(), 20u);
}

TEST(Cli, EstimateQR) {
  auto cfg = make(Command::estimate);
  cfg.terms = 100'000;
  auto o = run_cfg(cfg);
  ASSERT_EQ(o.code, exit_ok) << o.err;
  const auto j = json::parse(o.out);
  EXPECT_NEAR(j["product_check"].get<double>(), 1.5, 1e-4);
  cfg.estimate_target = "PQ";
  EXPECT_EQ(run_cfg(cfg).code, exit_usage);
}

TEST(Cli, GammaCommands) {
  auto cfg = make(Command::gamma);
  cfg.quotient = "a=1|1,b=1/2|3/2";
  cfg.terms = 1000;
  auto o = run_cfg(cfg);
  ASSERT_EQ(o.code, exit_ok) << o.err;
  auto j = json::parse(o.out);
  EXPECT_NEAR(j["value"].get<double>(), std::numbers::pi / 2, 1e-12);
  EXPECT_LT(j["partial"].get<double>(), j["value"].get<double>());

  cfg.quotient.clear();
  cfg.odd_base = 5;
  cfg.terms = 100'000;
  o = run_cfg(cfg);
  ASSERT_EQ(o.code, exit_ok) << o.err;
  j = json::parse(o.out);
  EXPECT_EQ(j["pass"], true);
  EXPECT_NEAR(j["wallis"].get<double>(), std::numbers::pi / 2, 1e-12);

  cfg.odd_base = 4;
  EXPECT_EQ(run_cfg(cfg).code, exit_usage);
  cfg.odd_base.reset();
  EXPECT_EQ(run_cfg(cfg).code, exit_usage);
  cfg.quotient = "a=1,b=2";
  EXPECT_EQ(run_cfg(cfg).code, exit_usage);
}

TEST(Cli, Digits) {
  auto cfg = make(Command::digits);
  cfg.n = 13;
  cfg.base = 2;
  auto o = run_cfg(cfg);
  ASSERT_EQ(o.code, exit_ok);
  EXPECT_EQ(o.out.rfind("1101\n", 0), 0u) << o.out;
  EXPECT_NE(o.out.find("digit_sum 3"), std::string::npos);
  EXPECT_NE(o.out.find("thue_morse -1"), std::string::npos);

  cfg.output = OutputFormat::json;
  cfg.n = 255;
  cfg.base = 16;
  const auto j = json::parse(run_cfg(cfg).out);
  EXPECT_EQ(j["digits"], "ff");
  EXPECT_EQ(j["digit_sum"], 30);
  EXPECT_EQ(j["length"], 2);

  cfg.base = 1;
  EXPECT_EQ(run_cfg(cfg).code, exit_usage);
}
