#include "tsl/stability.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace tsl;

namespace {

const CurveContext& ctx32() {
  static const CurveContext ctx(make_params(3, 2.0), QuadratureConfig{});
  return ctx;
}

const CurveContext& planar() {
  static const CurveContext ctx(make_params(2, 1.5), QuadratureConfig{});
  return ctx;
}

TestFunction extremal_at(const CurveContext& ctx, double T) {
  return extremal_test_function(normalize(ctx.solve_s_for_T(T).profile(), ctx.config()));
}

}  // namespace

TEST(Deficit, VanishesOnExtremals) {
  for (const CurveContext* ctx : {&ctx32(), &planar()}) {
    for (double T : {ctx->constants().T0, 2.0 * ctx->constants().TE}) {
      const DeficitReport d = deficit(*ctx, extremal_at(*ctx, T));
      EXPECT_NEAR(d.T / T, 1.0, 1e-8);
      EXPECT_NEAR(d.delta, 0.0, 1e-6 * d.gradEnergy);
    }
  }
}

TEST(Distance, ZeroOnExtremals) {
  const CurveContext& ctx = ctx32();
  const double T = ctx.constants().T0;
  const DistanceResult r = distance_to_extremals(ctx, extremal_at(ctx, T), T);
  EXPECT_NEAR(r.distance, 0.0, 1e-6);
  EXPECT_NEAR(r.alpha, 1.0, 1e-4);
}

TEST(Distance, RecoversDilationAndTranslation) {
  const CurveContext& ctx = planar();
  const double T = ctx.constants().T0;
  const TestFunction u = extremal_at(ctx, T).dilated(1.6).translated(0.4);
  const DistanceResult r = distance_to_extremals(ctx, u, T);
  EXPECT_NEAR(r.distance, 0.0, 1e-5);
  EXPECT_NEAR(r.alpha, 1.6, 1e-3);
  EXPECT_NEAR(r.offset, 0.4, 1e-3);
}

TEST(Perturbation, ZeroEpsilonIsTheExtremal) {
  const CurveContext& ctx = ctx32();
  const double T = ctx.constants().T0;
  const TestFunction u = perturbation_family(ctx, {T, PerturbationMode::profileBlend, 0.0});
  const TestNorms nm = u.norms(ctx.config());
  EXPECT_NEAR(nm.lpStarMass, 1.0, 1e-9);
  EXPECT_NEAR(nm.T(ctx.params()) / T, 1.0, 1e-8);
}

TEST(Perturbation, DilationBlendKeepsTheLevelClose) {
  const CurveContext& ctx = ctx32();
  const double T = ctx.constants().T0;
  const TestFunction u = perturbation_family(ctx, {T, PerturbationMode::dilationBlend, 0.2});
  const TestNorms nm = u.norms(ctx.config());
  EXPECT_NEAR(nm.lpStarMass, 1.0, 1e-9);
  EXPECT_NEAR(nm.T(ctx.params()) / T, 1.0, 0.05);
}

TEST(Perturbation, BoundaryBumpIsNonnegativeWithUnitMass) {
  const CurveContext& ctx = ctx32();
  const TestFunction u = perturbation_family(ctx, {ctx.constants().T0, PerturbationMode::boundaryBump, 0.1});
  EXPECT_NEAR(u.norms(ctx.config()).lpStarMass, 1.0, 1e-9);
  for (double x1 : {0.0, 0.1, 0.5, 2.0})
    for (double x2 : {-1.0, 0.0, 0.3, 1.5}) EXPECT_GE(u.value({x1, x2, 0.0}), 0.0);
}

TEST(Perturbation, ModeNamesRoundTrip) {
  for (auto m : {PerturbationMode::dilationBlend, PerturbationMode::profileBlend, PerturbationMode::boundaryBump})
    EXPECT_EQ(parse_mode(mode_name(m)), m);
  EXPECT_THROW(parse_mode("twist"), std::invalid_argument);
}

TEST(RatioScan, UnperturbedRowHasNoRatio) {
  const CurveContext& ctx = ctx32();
  const auto rows = stability_ratio_scan(ctx, ctx.constants().T0, {0.0, 0.05, 0.1}, PerturbationMode::profileBlend);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_FALSE(rows[0].ratioDefined);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_TRUE(rows[i].ratioDefined);
    EXPECT_GT(rows[i].delta, 0.0);
    EXPECT_GT(rows[i].ratio, 0.0);
    EXPECT_GT(rows[i].distance, rows[i - 1].distance);
  }
}

TEST(RatioScan, ParallelMatchesSerial) {
  const CurveContext& ctx = ctx32();
  const std::vector<double> eps{0.05, 0.1};
  const auto a = stability_ratio_scan(ctx, ctx.constants().T0, eps, PerturbationMode::dilationBlend);
  const auto b = stability_ratio_scan_serial(ctx, ctx.constants().T0, eps, PerturbationMode::dilationBlend);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    EXPECT_EQ(a[i].delta, b[i].delta);
    EXPECT_EQ(a[i].distance, b[i].distance);
  }
}

TEST(LogLogSlope, RecoversPowerLaw) {
  std::vector<double> x, y;
  for (double t : {0.01, 0.03, 0.1, 0.3}) {
    x.push_back(t);
    y.push_back(5.0 * std::pow(t, 2.5));
  }
  EXPECT_NEAR(log_log_slope(x, y), 2.5, 1e-12);
}

TEST(Annulus, FixtureSuiteHolds) {
  for (const auto& f : annulus_fixture_suite(ctx32(), planar())) {
    EXPECT_TRUE(f.check.applicable) << f.name;
    EXPECT_TRUE(f.check.pass) << f.name;
    EXPECT_LE(f.check.lhs, f.check.rhs) << f.name;
  }
}

TEST(Gluing, SplitsIntoTwoBranches) {
  std::vector<StabilityRow> rows(2);
  rows[0].epsilon = 0.2;
  rows[0].delta = 1.0;
  rows[0].distance = 0.5;
  rows[0].gradEnergy = 1.0;
  rows[1].epsilon = 0.02;
  rows[1].delta = 1e-4;
  rows[1].distance = 0.005;
  rows[1].gradEnergy = 1.0;
  const GluingReport g = glue_stability(rows, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(g.alphaPrime, std::min(1.0, 0.125));
  ASSERT_EQ(g.rows.size(), 2u);
  EXPECT_TRUE(g.rows[0].largeBranch);
  EXPECT_FALSE(g.rows[1].largeBranch);
  EXPECT_TRUE(g.all_hold());
}
