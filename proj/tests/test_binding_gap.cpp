#include "tsl/binding_gap.hpp"
#include "tsl/split_construction.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace tsl;

namespace {

const CurveContext& ctx32() {
  static const CurveContext ctx(make_params(3, 2.0), QuadratureConfig{});
  return ctx;
}

}  // namespace

TEST(SplitComplement, SymmetricSplit) {
  const Params P = make_params(3, 2.0);
  const SplitSpec s = split_complement(1.0, std::pow(2.0, -1.0 / P.pStar), std::pow(2.0, -1.0 / P.pSharp), P);
  EXPECT_NEAR(s.m2, s.m1, 1e-15);
  EXPECT_NEAR(s.t2, s.t1, 1e-15);
  EXPECT_NEAR(s.T1, s.T2, 1e-14);
}

TEST(SplitComplement, ArithmeticCompletion) {
  const Params P = make_params(3, 2.0);
  const SplitSpec s = split_complement(1.0, 0.6, 0.3, P);
  EXPECT_NEAR(s.m2, std::pow(1.0 - std::pow(0.6, 6.0), 1.0 / 6.0), 1e-15);
  EXPECT_NEAR(s.t2, std::pow(1.0 - std::pow(0.3, 4.0), 0.25), 1e-15);
  EXPECT_NEAR(s.T1, 0.3 / 0.6, 1e-15);
}

TEST(SplitComplement, CornerDegenerates) {
  const Params P = make_params(3, 2.0);
  const SplitSpec s = split_complement(1.0, 1.0 - 1e-9, 1.0, P);
  EXPECT_LT(s.m2, 0.1);
  EXPECT_EQ(s.t2, 0.0);
}

TEST(SplitComplement, RejectsOutOfRange) {
  const Params P = make_params(3, 2.0);
  EXPECT_THROW(split_complement(1.0, 0.0, 0.5, P), std::invalid_argument);
  EXPECT_THROW(split_complement(1.0, 1.0, 0.5, P), std::invalid_argument);
  EXPECT_THROW(split_complement(1.0, 0.5, 1.5, P), std::invalid_argument);
}

TEST(BindingGap, SymmetricSplitAtCentredLevel) {
  const CurveContext& ctx = ctx32();
  const GapResult g = binding_gap(ctx, symmetric_split(ctx.constants().T0, ctx.params()));
  EXPECT_TRUE(g.certified());
  EXPECT_GT(g.gap, 0.0);
  EXPECT_NEAR(g.lhs, std::pow(ctx.constants().sobolevFloor, 2.0), 1e-9);
}

TEST(BindingGap, ZeroTracePartUsesSobolevConstant) {
  const CurveContext& ctx = ctx32();
  const Params& P = ctx.params();
  const double T = ctx.constants().T0;
  const SplitSpec s = split_complement(T, 0.5, 0.0, P);
  const GapResult g = binding_gap(ctx, s);
  const double expected = std::pow(s.m1, P.p) * std::pow(ctx.constants().S, P.p) +
                          std::pow(s.m2, P.p) * std::pow(ctx.phi_value(s.T2), P.p);
  EXPECT_NEAR(g.rhs, expected, 1e-10 * expected);
  EXPECT_TRUE(g.certified());
}

TEST(BindingGap, SwapSymmetryIsExact) {
  const CurveContext& ctx = ctx32();
  const SplitSpec s = split_complement(1.7, 0.4, 0.9, ctx.params());
  const GapResult a = binding_gap(ctx, s);
  const GapResult b = binding_gap(ctx, s.swapped());
  EXPECT_EQ(a.gap, b.gap);
  EXPECT_EQ(a.rhs, b.rhs);
}

TEST(BindingGap, CornerPathVanishes) {
  const CurveContext& ctx = ctx32();
  const double T = ctx.constants().T0;
  const std::vector<GapResult> path = corner_path(ctx, T, {0.4, 0.2, 0.1, 0.05, 0.02});
  for (std::size_t i = 1; i < path.size(); ++i) EXPECT_LT(path[i].gap, path[i - 1].gap);
  EXPECT_LT(path.back().gap, 0.01 * path.back().lhs);
  for (const auto& g : path) EXPECT_NEAR(g.spec.T2, T, 1e-12);
}

TEST(BindingScan, CoarseGridHasSixteenPositiveGaps) {
  const CurveContext& ctx = ctx32();
  const BindingScan scan = scan_binding_grid(ctx, ctx.constants().T0, 4);
  ASSERT_EQ(scan.table.size(), 16u);
  for (const auto& g : scan.table) EXPECT_GT(g.gap, 0.0);
  EXPECT_TRUE(scan.all_certified());
}

TEST(BindingScan, LargeLevelStaysStrict) {
  const CurveContext& ctx = ctx32();
  const BindingScan scan = scan_binding_grid(ctx, 3.0 * ctx.constants().TE, 8);
  EXPECT_GT(scan.minGap, 0.0);
  EXPECT_TRUE(scan.all_certified());
}

TEST(BindingScan, ParallelMatchesSerial) {
  const CurveContext& ctx = ctx32();
  const BindingScan a = scan_binding_grid(ctx, 1.0, 6);
  const BindingScan b = scan_binding_grid_serial(ctx, 1.0, 6);
  EXPECT_EQ(a.minGap, b.minGap);
  EXPECT_EQ(a.argmin.m1, b.argmin.m1);
  EXPECT_EQ(a.argmin.t1, b.argmin.t1);
}

TEST(Partitions, RandomPartitionsRespectTheInfimum) {
  const CurveContext& ctx = ctx32();
  for (int parts : {3, 4})
    for (const auto& pc : check_random_partitions(ctx, 1.5, parts, 5, 42)) {
      EXPECT_TRUE(pc.holds());
      EXPECT_EQ(pc.m.size(), static_cast<std::size_t>(parts));
    }
}
