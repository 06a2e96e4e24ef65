#include "tsl/commands.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <vector>

using namespace tsl;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tsl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST(Cli, ConstantsSucceeds) {
  const CliRun r = cli({"constants", "--n", "3", "--p", "2"});
  EXPECT_EQ(r.code, 0) << r.err;
  const ResultEnvelope env = parse_envelope(r.out);
  EXPECT_TRUE(env.all_pass());
  EXPECT_TRUE(env.records.contains("constants"));
}

TEST(Cli, IdentityOnExplicitGrid) {
  const CliRun r = cli({"identity", "--n", "3", "--p", "2", "--T-grid", "0.2:4.0:20"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, BindingAtOneLevel) {
  const CliRun r = cli({"binding", "--n", "3", "--p", "2", "--T", "1.0", "--grid", "32", "--margin", "0.05"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(cli({"constants", "--bogus"}).code, 1);
  EXPECT_EQ(cli({"curve", "--T-grid", "1:0:3"}).code, 1);
  EXPECT_EQ(cli({"transport", "--n", "3", "--p", "2"}).code, 1);
  EXPECT_EQ(cli({}).code, 1);
}

TEST(Cli, LevelNames) {
  const CurveContext ctx(make_params(3, 2.0), QuadratureConfig{});
  const FundamentalConstants& c = ctx.constants();
  EXPECT_EQ(resolve_level("T0", c), c.T0);
  EXPECT_EQ(resolve_level("3TE", c), 3.0 * c.TE);
  EXPECT_EQ(resolve_level("1.25", c), 1.25);
  EXPECT_THROW(resolve_level("3XY", c), std::invalid_argument);
}

TEST(Cli, FailedCertificateExitsTwoWithWarnings) {
  const CliRun r = cli({"split", "--n", "3", "--p", "2"});
  EXPECT_EQ(r.code, 2) << r.err;
  const ResultEnvelope env = parse_envelope(r.out);
  EXPECT_FALSE(env.warnings.empty());
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const std::vector<std::string> args{"binding", "--n", "2", "--p", "1.5", "--T", "TE", "--grid", "6"};
  const CliRun a = cli(args);
  std::vector<std::string> threaded = args;
  threaded.insert(threaded.end(), {"--threads", "3"});
  const CliRun b = cli(threaded);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}
