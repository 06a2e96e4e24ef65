#include "tsl/split_construction.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace tsl;

namespace {

const CurveContext& ctx32() {
  static const CurveContext ctx(make_params(3, 2.0), QuadratureConfig{});
  return ctx;
}

const PieceNorms* piece(const SplitConstruction& sc, const std::string& role) {
  for (const auto& p : sc.pieces)
    if (p.role == role) return &p;
  return nullptr;
}

}  // namespace

TEST(SplitFunction, SymmetricSplitMeetsConstraints) {
  const CurveContext& ctx = ctx32();
  const SplitSpec spec = symmetric_split(ctx.constants().T0, ctx.params());
  const SplitConstruction sc = build_split_function(ctx, spec, 8.0);
  EXPECT_LE(sc.massResidual, 1e-10);
  EXPECT_LE(sc.traceResidual, 1e-10);
  EXPECT_GE(sc.wEnergy, sc.lhs - 1e-6);
  EXPECT_GE(sc.lowerHalfMass, 0.5);
  EXPECT_TRUE(sc.correctionSolved);
  const PieceNorms* b1 = piece(sc, "bump1");
  const PieceNorms* b2 = piece(sc, "bump2");
  ASSERT_TRUE(b1 && b2);
  EXPECT_NEAR(b1->gradEnergy, b2->gradEnergy, 1e-8 * b1->gradEnergy);
}

TEST(SplitFunction, HeavierBumpSitsBelow) {
  const CurveContext& ctx = ctx32();
  const SplitSpec spec = split_complement(1.4, 0.6, 0.8, ctx.params());
  ASSERT_LT(spec.m1, spec.m2);
  const SplitConstruction sc = build_split_function(ctx, spec, 8.0);
  EXPECT_GE(sc.lowerHalfMass, 0.5);
}

TEST(SplitFunction, BumpMassesFollowTheSplit) {
  const CurveContext& ctx = ctx32();
  const SplitSpec spec = split_complement(1.4, 0.6, 0.8, ctx.params());
  const SplitConstruction sc = build_split_function(ctx, spec, 16.0);
  const double ratio = piece(sc, "bump1")->lpStarMass / piece(sc, "bump2")->lpStarMass;
  const double pStar = ctx.params().pStar;
  EXPECT_NEAR(ratio / (std::pow(spec.m1, pStar) / std::pow(spec.m2, pStar)), 1.0, 0.01);
}

TEST(SplitFunction, RejectsOverlappingBumps) {
  const CurveContext& ctx = ctx32();
  EXPECT_THROW(build_split_function(ctx, symmetric_split(1.0, ctx.params()), 4.0, 6.0), std::invalid_argument);
}

TEST(SplitConvergence, ExcessDecreasesAlongSchedule) {
  const CurveContext& ctx = ctx32();
  const SplitSpec spec = symmetric_split(ctx.constants().T0, ctx.params());
  const std::vector<SplitEnergyRow> rows = split_energy_convergence(ctx, spec, {4.0, 8.0, 16.0, 32.0});
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].aboveInfimum, -1e-6);
    EXPECT_LE(rows[i].massResidual, 1e-10);
    if (i > 0) EXPECT_LT(rows[i].excess, rows[i - 1].excess);
  }
}
