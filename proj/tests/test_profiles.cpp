#include "tsl/phi_curve.hpp"
#include "tsl/profiles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace tsl;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed-form norms for n = 3, p = 2:
//   centred bubble (1 + r^2)^{-1/2}: trace pi, half-space mass pi^2 / 8
//   Escobar profile 1/|x + e1|:      trace pi, gradient energy pi, mass pi / 6
const double kEscobarE = std::pow(kPi, 0.25);
const double kEscobarTE = std::pow(kPi, 0.25) / std::pow(kPi / 6.0, 1.0 / 6.0);
const double kCentredT0 = std::pow(kPi, 0.25) / std::pow(kPi * kPi / 8.0, 1.0 / 6.0);

}  // namespace

TEST(Profiles, PointValues) {
  const Params P = make_params(3, 2.0);
  EXPECT_DOUBLE_EQ(eval_profile(ProfileFamily::sobolev, 0.0, P).value, 1.0);
  EXPECT_NEAR(eval_profile(ProfileFamily::sobolev, 1.0, P).value, 1.0 / std::sqrt(2.0), 1e-15);
  for (auto np : {std::pair{2, 1.5}, std::pair{3, 2.0}, std::pair{5, 3.0}})
    EXPECT_DOUBLE_EQ(eval_profile(ProfileFamily::escobar, 1.0, make_params(np.first, np.second)).value, 1.0);
}

TEST(Profiles, CentredBubbleHasHalfTheFullSpaceMass) {
  const QuadratureConfig cfg;
  for (auto np : {std::pair{3, 2.0}, std::pair{2, 1.5}}) {
    const Params P = make_params(np.first, np.second);
    const HalfspaceNorms h = halfspace_norms(TranslatedProfile(ProfileFamily::sobolev, 0.0, P), cfg);
    const FullspaceNorms f = fullspace_sobolev_norms(P, cfg);
    EXPECT_NEAR(h.lpStarMass, 0.5 * f.lpStarMass, 1e-9 * f.lpStarMass);
  }
}

TEST(Profiles, ClosedFormNormsInThreeDimensions) {
  const QuadratureConfig cfg;
  const Params P = make_params(3, 2.0);
  const HalfspaceNorms c = halfspace_norms(TranslatedProfile(ProfileFamily::sobolev, 0.0, P), cfg);
  EXPECT_NEAR(c.traceMass, kPi, 1e-9);
  EXPECT_NEAR(c.lpStarMass, kPi * kPi / 8.0, 1e-9);
  const HalfspaceNorms e = halfspace_norms(TranslatedProfile(ProfileFamily::escobar, -1.0, P), cfg);
  EXPECT_NEAR(e.traceMass, kPi, 1e-9);
  EXPECT_NEAR(e.gradEnergy, kPi, 1e-9);
  EXPECT_NEAR(e.lpStarMass, kPi / 6.0, 1e-9);
}

TEST(Profiles, FarInteriorTranslateHasVanishingTrace) {
  const QuadratureConfig cfg;
  const Params P = make_params(3, 2.0);
  const HalfspaceNorms h = halfspace_norms(TranslatedProfile(ProfileFamily::sobolev, 50.0, P), cfg);
  EXPECT_LT(h.traceMass / std::pow(h.lpStarMass, P.pSharp / P.pStar), 1e-3);
}

TEST(Profiles, EscobarRatioMatchesConstant) {
  const QuadratureConfig cfg;
  for (auto np : {std::pair{3, 2.0}, std::pair{2, 1.5}}) {
    const Params P = make_params(np.first, np.second);
    const CurveContext ctx(P, cfg);
    const HalfspaceNorms e = halfspace_norms(TranslatedProfile(ProfileFamily::escobar, -1.0, P), cfg);
    const double ratio = std::pow(e.gradEnergy, 1.0 / P.p) / std::pow(e.traceMass, 1.0 / P.pSharp);
    EXPECT_NEAR(ratio / ctx.constants().E, 1.0, 1e-8);
  }
  EXPECT_NEAR(CurveContext(make_params(3, 2.0), cfg).constants().E, kEscobarE, 1e-9);
}

TEST(Profiles, NormalizedHasUnitMass) {
  const QuadratureConfig cfg;
  const Params P = make_params(3, 2.0);
  for (const auto& tp : {TranslatedProfile(ProfileFamily::sobolev, 0.7, P), TranslatedProfile(ProfileFamily::escobar, -1.3, P),
                         TranslatedProfile::hyperbolic_with_gap(0.05, P)}) {
    const NormalizedExtremal ne = normalize(tp, cfg);
    const HalfspaceNorms h = halfspace_norms(tp, cfg);
    EXPECT_NEAR(h.lpStarMass / std::pow(ne.lpStarNormalizer, P.pStar), 1.0, 1e-10);
  }
}

TEST(Profiles, CentredBubbleTraceLevel) {
  const QuadratureConfig cfg;
  const NormalizedExtremal ne = normalize(TranslatedProfile(ProfileFamily::sobolev, 0.0, make_params(3, 2.0)), cfg);
  EXPECT_NEAR(ne.T, kCentredT0, 1e-9);
}

TEST(Profiles, EscobarTranslatesAreDilations) {
  const QuadratureConfig cfg;
  for (auto np : {std::pair{3, 2.0}, std::pair{2, 1.5}}) {
    const Params P = make_params(np.first, np.second);
    const NormalizedExtremal a = normalize(TranslatedProfile(ProfileFamily::escobar, -1.0, P), cfg);
    const NormalizedExtremal b = normalize(TranslatedProfile(ProfileFamily::escobar, -2.0, P), cfg);
    EXPECT_NEAR(a.T / b.T, 1.0, 1e-8);
    EXPECT_NEAR(a.phi / b.phi, 1.0, 1e-8);
  }
}

TEST(Profiles, TraceRatioLandmarks) {
  const QuadratureConfig cfg;
  const Params P = make_params(3, 2.0);
  EXPECT_NEAR(trace_ratio(ProfileFamily::sobolev, 0.0, P, cfg), kCentredT0, 1e-9);
  EXPECT_NEAR(trace_ratio(ProfileFamily::escobar, -1.0, P, cfg), kEscobarTE, 1e-9);
  // far interior: trace pi/(1+s^2), mass within 1e-7 of the full-space value pi^2/4
  const double s = 200.0;
  const double farT = std::pow(kPi / (1.0 + s * s), 0.25) / std::pow(kPi * kPi / 4.0, 1.0 / 6.0);
  EXPECT_NEAR(trace_ratio(ProfileFamily::sobolev, s, P, cfg) / farT, 1.0, 1e-6);
}
