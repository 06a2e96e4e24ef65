#include "tsl/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <limits>

using namespace tsl;

TEST(Table, EmptyCsvIsHeaderOnly) {
  const Table t{{"a", "b"}, {}};
  EXPECT_EQ(emit_csv(t), "a,b\n");
  EXPECT_EQ(emit_table(t, TableFormat::json), "[]\n");
}

TEST(Table, RejectsRaggedRow) {
  Table t{{"a", "b"}, {}};
  EXPECT_THROW(t.add_row({1}), std::invalid_argument);
}

TEST(Table, CsvQuotesSpecialStrings) {
  Table t{{"name", "x"}, {}};
  t.add_row({"plain", 1});
  t.add_row({"a,b", 2});
  t.add_row({"say \"hi\"", true});
  EXPECT_EQ(emit_csv(t), "name,x\nplain,1\n\"a,b\",2\n\"say \"\"hi\"\"\",1\n");
}

TEST(Table, PhiTableStartsWithTheCurveColumns) {
  const Table t = phi_table({});
  ASSERT_GE(t.columns.size(), 5u);
  const std::vector<std::string> head(t.columns.begin(), t.columns.begin() + 5);
  EXPECT_EQ(head, (std::vector<std::string>{"T", "regime", "s", "phi", "yT"}));
}

TEST(Table, GapTableHasTenColumns) {
  EXPECT_EQ(gap_table({}).columns.size(), 10u);
}

TEST(Table, CurvePlotCarriesOverlays) {
  const CurveContext ctx(make_params(3, 2.0), QuadratureConfig{});
  const CurveScan scan = scan_curve(ctx, {ctx.constants().T0});
  const Table t = curve_plot_data(scan, ctx.constants(), ctx.params());
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_GE(t.columns.size(), 5u);
  EXPECT_DOUBLE_EQ(t.rows[0][3].get<double>(), ctx.constants().sobolevFloor);
}

TEST(Format, RealsAndNonFinite) {
  EXPECT_EQ(format_real(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_real(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_real(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(std::stod(format_real(0.1)), 0.1);
  EXPECT_TRUE(real_json(std::nan("")).is_null());
  EXPECT_EQ(parse_format("json"), TableFormat::json);
  EXPECT_THROW(parse_format("xml"), std::invalid_argument);
}

TEST(Envelope, RoundTrips) {
  ResultEnvelope env;
  env.configEcho = {{"command", "constants"}, {"n", 3}};
  env.timestamp = "1970-01-01T00:00:00Z";
  env.records["x"] = 1.5;
  env.certify("good", true, "ok");
  env.certify("bad", false, "off by one");
  EXPECT_FALSE(env.all_pass());
  ASSERT_EQ(env.warnings.size(), 1u);
  EXPECT_NE(env.warnings[0].find("bad"), std::string::npos);
  const std::string text = emit_envelope(env);
  EXPECT_EQ(text.back(), '\n');
  const ResultEnvelope back = parse_envelope(text);
  EXPECT_EQ(emit_envelope(back), text);
  ASSERT_EQ(back.certificates.size(), 2u);
  EXPECT_EQ(back.certificates[1].detail, "off by one");
}

TEST(Envelope, TimestampFollowsSourceDateEpoch) {
  const char* saved = std::getenv("SOURCE_DATE_EPOCH");
  const std::string keep = saved ? saved : "";
  setenv("SOURCE_DATE_EPOCH", "86400", 1);
  EXPECT_EQ(deterministic_timestamp(), "1970-01-02T00:00:00Z");
  setenv("SOURCE_DATE_EPOCH", "yesterday", 1);
  EXPECT_THROW(deterministic_timestamp(), std::invalid_argument);
  unsetenv("SOURCE_DATE_EPOCH");
  EXPECT_EQ(deterministic_timestamp(), "1970-01-01T00:00:00Z");
  if (saved) setenv("SOURCE_DATE_EPOCH", keep.c_str(), 1);
}

TEST(Parse, Grid) {
  EXPECT_EQ(parse_grid("0:1:5"), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ(parse_grid("2:2:1"), std::vector<double>{2.0});
  for (const char* bad : {"0:1", "1:0:3", "0:1:0", "0:1:x", "a:1:3"}) EXPECT_THROW(parse_grid(bad), std::invalid_argument) << bad;
}

TEST(Parse, List) {
  EXPECT_EQ(parse_list("4,8,16"), (std::vector<double>{4.0, 8.0, 16.0}));
  EXPECT_THROW(parse_list(""), std::invalid_argument);
  EXPECT_THROW(parse_list("4,x"), std::invalid_argument);
}
