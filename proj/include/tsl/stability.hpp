#pragma once

#include "tsl/phi_curve.hpp"
#include "tsl/split_construction.hpp"
#include "tsl/test_function.hpp"

#include <string>
#include <vector>

namespace tsl {

/// Deficit of a test function at its own trace level: u is rescaled to unit
/// bulk mass, T is measured, and delta = ||grad u||_p^p - Phi(T)^p.
struct DeficitReport {
  double T = 0.0;
  double gradEnergy = 0.0;  // ||grad u||_p^p after normalization
  double phiT = 0.0;        // Phi(T)
  double delta = 0.0;
  double relError = 0.0;    // quadrature relative error of the norms
};
DeficitReport deficit(const CurveContext& ctx, const TestFunction& u);

/// inf over v = sign * alpha^{-n/p*} U_T((x - x0 e2) / alpha) of ||grad(u - v)||_p.
struct DistanceResult {
  double distance = 0.0;
  double alpha = 1.0;
  double offset = 0.0;
  int sign = 1;
  bool converged = false;
  bool offsetPinned = false;  // axisymmetric u: x0 = 0 by symmetry
  double offsetProbe = 0.0;   // min over x0 = +-h of the distance minus the pinned value (if probed)
};
struct DistanceOptions {
  bool probeOffset = false;  // local check of the pinned offset (costly for n >= 3)
  double tol = 1e-9;
};
DistanceResult distance_to_extremals(const CurveContext& ctx, const TestFunction& u, double T,
                                     const DistanceOptions& opts = {});

enum class PerturbationMode { dilationBlend, profileBlend, boundaryBump };
std::string mode_name(PerturbationMode mode);
PerturbationMode parse_mode(const std::string& name);

struct PerturbationSpec {
  double baseT = 0.0;
  PerturbationMode mode = PerturbationMode::dilationBlend;
  double epsilon = 0.0;  // in [0, 0.5]
};

/// dilationBlend: (1 - eps) U_T + eps * (U_T dilated by 2); profileBlend:
/// (1 - eps) U_T + eps U_{1.25 T}; boundaryBump: U_T plus eps times a small
/// bubble whose support crosses the boundary.  The result has unit bulk mass.
TestFunction perturbation_family(const CurveContext& ctx, const PerturbationSpec& spec);

struct StabilityRow {
  double epsilon = 0.0;
  double T = 0.0;
  double delta = 0.0;
  double distance = 0.0;
  double ratio = 0.0;  // delta / distance^2; NaN when distance = 0
  double gradEnergy = 0.0;
  bool ratioDefined = false;
  bool converged = true;
};

std::vector<StabilityRow> stability_ratio_scan(const CurveContext& ctx, double baseT,
                                               const std::vector<double>& epsGrid, PerturbationMode mode);
std::vector<StabilityRow> stability_ratio_scan_serial(const CurveContext& ctx, double baseT,
                                                      const std::vector<double>& epsGrid,
                                                      PerturbationMode mode);

/// Least-squares slope of log y against log x over pairs with x, y > 0.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

/// ||grad psi||_{L^n(H)} for the fixed annulus cutoff psi (1 on B7 \ B2,
/// 0 on B1 and outside B8, smoothstep ramps), centred on the boundary.
double annulus_cutoff_gradient_norm(int n, const QuadratureConfig& cfg);

struct AnnulusCheck {
  double bulkMass = 0.0;  // int over H cut to B_8R \ B_R of |u|^{p*}
  double lhs = 0.0;       // boundary trace over B_7R \ B_2R
  double rhs = 0.0;       // p# (||grad u|| + ||grad psi||_n eps^{1/p*}) eps^{(p# - 1)/p*}
  bool applicable = false;
  bool pass = false;
};
/// Annuli centred at the boundary point (0, center2, 0); u is normalized first.
AnnulusCheck annulus_trace_check(const TestFunction& u, double R, double epsilonMass, double center2,
                                 const QuadratureConfig& cfg);

/// The three standard annulus cases: the extremal at T0 of ctx with R
/// doubled until the annulus holds less than 1e-3 of the mass, a bubble cut
/// off inside B_R, and the split function of the planar context (n = 2)
/// with the annulus centred between its bumps and epsilon equal to the
/// measured annulus mass.
struct AnnulusFixture {
  std::string name;
  double R = 0.0;
  double epsilonMass = 0.0;
  double center2 = 0.0;
  AnnulusCheck check;
};
std::vector<AnnulusFixture> annulus_fixture_suite(const CurveContext& ctx, const CurveContext& planar);

/// Case split of the quadratic stability argument with an externally
/// supplied local constant alphaT: rows with delta >= delta0 ||grad u||^2 use
/// d^2 <= 4 ||grad u||^2, the others the local bound delta >= alphaT/2 d^2.
struct GluingRow {
  double delta = 0.0;
  double distanceSq = 0.0;
  bool largeBranch = false;
  double branchConstant = 0.0;
  bool holds = false;
};
struct GluingReport {
  double alphaT = 0.0;
  double delta0 = 0.0;
  double alphaPrime = 0.0;  // min(alphaT / 2, delta0 / 4)
  std::vector<GluingRow> rows;
  bool all_hold() const;
};
GluingReport glue_stability(const std::vector<StabilityRow>& rows, double alphaT, double delta0);

}  // namespace tsl
