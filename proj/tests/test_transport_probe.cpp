#include "tsl/transport_probe.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace tsl;

namespace {

const CurveContext& planar() {
  static const CurveContext ctx(make_params(2, 1.5), QuadratureConfig{});
  return ctx;
}

TestFunction extremal_at(const CurveContext& ctx, double T) {
  return extremal_test_function(normalize(ctx.solve_s_for_T(T).profile(), ctx.config()));
}

}  // namespace

TEST(Discretize, UniformSquareGivesQuarterAtoms) {
  GridSpec g{0.0, 1.0, 0.0, 1.0, 2, 2, 4, {}, {}};
  const DiscretizedDensity d = discretize_density([](double, double) { return 1.0; }, g);
  ASSERT_EQ(d.measure.size(), 4u);
  for (double w : d.measure.weights) EXPECT_NEAR(w, 0.25, 1e-15);
  EXPECT_NEAR(d.premass, 1.0, 1e-15);
  EXPECT_EQ(d.dropped, 0u);
}

TEST(Discretize, ExtremalPremassMatchesQuadrature) {
  const CurveContext& ctx = planar();
  const TestFunction u = extremal_at(ctx, ctx.constants().T0);
  const DiscretizedDensity d = discretize_test_function(u, fit_grid(u, 1500));
  EXPECT_LE(d.measure.size(), 1500u);
  EXPECT_NEAR(d.premass, 1.0, 0.01);
  EXPECT_NEAR(d.measure.total(), 1.0, 1e-12);
}

TEST(Discretize, SplitBumpMassesFollowPieces) {
  const CurveContext& ctx = planar();
  const SplitSpec spec = split_complement(ctx.constants().T0, 0.6, 0.8, ctx.params());
  const SplitConstruction sc = build_split_function(ctx, spec, 4.0, 12.0);
  const DiscretizedDensity d = discretize_test_function(sc.w, fit_grid(sc.w, 2000));
  double upper = 0.0, lower = 0.0;
  for (std::size_t i = 0; i < d.measure.size(); ++i) (d.measure.point(i)[1] > 0.0 ? upper : lower) += d.measure.weights[i];
  double up = 0.0, down = 0.0;
  for (const auto& p : sc.pieces) (p.offset > 0.0 ? up : down) += p.lpStarMass;
  EXPECT_NEAR(upper / up, 1.0, 0.01);
  EXPECT_NEAR(lower / down, 1.0, 0.01);
}

TEST(Cone, ShiftedTargetForcesTheWholeLowerBump) {
  DiscreteMeasure mu, nu;
  mu.add(std::array{1.0, 1.0}, 0.3);
  mu.add(std::array{1.5, 2.0}, 0.2);
  mu.add(std::array{1.0, -1.0}, 0.25);
  mu.add(std::array{2.0, -2.0}, 0.25);
  for (double y2 : {1.0, 2.0, 3.0, 4.0}) nu.add(std::array{1.0, y2}, 0.25);
  const TransportPlan plan = solve_exact_plan(mu, nu);
  const ConeStats st = cone_exclusion_stats(mu, nu, barycentric_map(plan, mu, nu), ConeSpec{}, -1.0, 0.01);
  EXPECT_NEAR(st.lowerMass, 0.5, 1e-15);
  EXPECT_NEAR(st.muF, st.lowerMass, 1e-12);
  EXPECT_EQ(st.muE, 0.0);
}

TEST(Cone, SplitProbeStaysBelowConeMass) {
  const CurveContext& ctx = planar();
  const SplitSpec spec = symmetric_split(ctx.constants().T0, ctx.params());
  const SplitTransportReport rep = split_transport_probe(ctx, spec, 4.0, 14.0, 600, ConeSpec{});
  EXPECT_TRUE(rep.cone.claimHolds(0.02));
  EXPECT_TRUE(rep.monotonicity.passes());
  EXPECT_LE(rep.marginalError, 1e-10);
  EXPECT_NEAR(rep.cone.upperMass + rep.cone.lowerMass, 1.0, 1e-12);
}

TEST(DeficitCs, ConstantFollowsItsFormula) {
  const Params P = make_params(2, 1.5);
  EXPECT_NEAR(deficit_cs_constant(P, 2.0, 1.3), 2.0 * 1.3 / (1.5 * std::sqrt(2.0)), 1e-15);
}

TEST(DeficitCs, ExtremalHasNegligibleRightHandSide) {
  const CurveContext& ctx = planar();
  const TestFunction u = extremal_at(ctx, ctx.constants().T0);
  const DeficitCsCheck c = deficit_cs_check(ctx, u, 500);
  EXPECT_LT(c.rhs, 1e-10);
  EXPECT_NEAR(c.delta, 0.0, 1e-6);
  const DeficitCsCheck d = deficit_cs_check(ctx, u.dilated(1.7), 500);
  EXPECT_LT(d.rhs, 1e-10);
}

TEST(DeficitCs, PerturbationStaysWithinBound) {
  const CurveContext& ctx = planar();
  const TestFunction u = perturbation_family(ctx, {ctx.constants().T0, PerturbationMode::profileBlend, 0.2});
  const DeficitCsCheck c = deficit_cs_check(ctx, u, 1000);
  EXPECT_GT(c.rhs, 0.0);
  EXPECT_LE(c.rhs, 1.25 * c.bound);
}
