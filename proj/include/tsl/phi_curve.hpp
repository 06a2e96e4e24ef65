#pragma once

#include "tsl/params.hpp"
#include "tsl/profiles.hpp"
#include "tsl/quadrature.hpp"

#include <limits>
#include <string>
#include <vector>

namespace tsl {

struct FundamentalConstants {
  double S = 0.0;             // Sobolev constant, the curve's value at T = 0
  double E = 0.0;             // Escobar trace constant
  double TE = 0.0;            // trace level of the Escobar extremal
  double T0 = 0.0;            // trace level of the bubble centred on the boundary
  double sobolevFloor = 0.0;  // S / 2^{1/n}
  double phiTE = 0.0;         // curve value at TE
  double TStarEstimate = 0.0; // first inflection estimate on (0, T0); 0 if not computed
  double TStarError = 0.0;    // grid half-width around the estimate
};

struct SolvedS {
  ProfileFamily regime = ProfileFamily::sobolev;
  double s = 0.0;
  double gap = 0.0;  // -1 - s for the hyperbolic regime
  TranslatedProfile profile() const;
  Params params;
};

struct PhiPoint {
  double T = 0.0;
  ProfileFamily regime = ProfileFamily::sobolev;
  double s = 0.0;
  double gap = 0.0;
  double phi = 0.0;
  double yT = 0.0;
  double measuredT = 0.0;  // trace of the normalized extremal; equals T up to the solve
  double relError = 0.0;   // quadrature relative error estimate
  // phi / (T^{p#}/p#) - 1; NaN until scan_curve fills it
  double asymptoteExcess = std::numeric_limits<double>::quiet_NaN();
  bool excessExtended = false;  // evaluated in 113-bit arithmetic
};

/// Raised when T(s) is found to be non-monotone on the bracketing table.
class MonotonicityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-(n, p) solver state: the fundamental constants plus a fixed table of
/// (s, T(s)) samples used to bracket s_T.  The table is computed once, so
/// every solve is independent of call order.
class CurveContext {
 public:
  CurveContext(const Params& params, const QuadratureConfig& cfg);

  const Params& params() const { return params_; }
  const QuadratureConfig& config() const { return cfg_; }
  const FundamentalConstants& constants() const { return constants_; }
  double regime_tolerance() const { return 1e-9 * constants_.TE; }

  SolvedS solve_s_for_T(double T) const;
  PhiPoint phi_of_T(double T) const;
  /// phi_of_T(T).phi for T > 0 and S for T = 0.
  double phi_value(double T) const;

  /// Fills constants().TStarEstimate from a uniform grid of `count` points on (0, T0).
  void estimate_t_star(int count = 64);

 private:
  double sobolev_trace(double s) const;
  double hyperbolic_trace(double logGap) const;

  Params params_;
  QuadratureConfig cfg_;
  FundamentalConstants constants_;
  std::vector<double> sobolevS_, sobolevT_;       // s increasing, T decreasing
  std::vector<double> hyperLogGap_, hyperT_;      // log gap increasing, T decreasing
};

FundamentalConstants fundamental_constants(const Params& params, const QuadratureConfig& cfg);
SolvedS solve_s_for_T(double T, const Params& params, const QuadratureConfig& cfg);
PhiPoint phi_of_T(double T, const Params& params, const QuadratureConfig& cfg);

struct IdentityCheck {
  double T = 0.0;
  double s = 0.0;
  double residual = 0.0;
  double condition = 0.0;   // |s| T^{p#} / (n int U_T^{p#}): size of the cancelling terms
  bool extended = false;    // evaluated in 113-bit arithmetic
};

/// Relative residual of p# Phi Y_T + s T^{p#} = n int_H U_T^{p#}.  When the
/// cancellation is too severe for double precision the integrals are
/// re-evaluated in 113-bit arithmetic.
IdentityCheck verify_transport_identity(const CurveContext& ctx, double T);
IdentityCheck verify_transport_identity(double T, const Params& params, const QuadratureConfig& cfg);

/// Identity terms of a given translate evaluated in 113-bit arithmetic with
/// relative quadrature tolerance relTol.  Returns the relative residual.
double transport_identity_residual_extended(const TranslatedProfile& tp, double relTol);
/// phi / (T^{p#}/p#) - 1 of the normalized profile in 113-bit arithmetic.
double asymptote_excess_extended(const TranslatedProfile& tp, double relTol);
/// Fills pt.asymptoteExcess; switches to 113-bit arithmetic once the excess
/// falls below what the double-precision norms resolve.
void resolve_asymptote_excess(const CurveContext& ctx, PhiPoint& pt);

struct ShapeFailure {
  std::string certificate;
  std::size_t index = 0;
  double T = 0.0;
  double value = 0.0;
};

struct ShapeReport {
  bool decreasingBelowT0 = true;    // strict decrease on grid points in (0, T0]
  bool decreasingBelowTE = true;    // literal decrease on all grid points below TE
  bool increasingAboveT0 = true;    // strict increase on grid points >= T0
  bool convexAboveT0 = true;        // second divided differences >= -tol above T0
  bool aboveAsymptote = true;       // phi > T^{p#}/p#
  bool aboveLowerBounds = true;     // phi >= max(E T, S/2^{1/n}) - tol
  bool tailRatioDecreasing = true;  // phi / (T^{p#}/p#) decreasing on T >= TE
  double lastTailRatio = 0.0;
  double lastTailExcess = 0.0;  // lastTailRatio - 1 without rounding
  std::vector<ShapeFailure> failures;

  bool all_pass() const {
    return decreasingBelowT0 && increasingAboveT0 && convexAboveT0 && aboveAsymptote &&
           aboveLowerBounds && tailRatioDecreasing;
  }
};

struct CurveScan {
  FundamentalConstants constants;
  std::vector<PhiPoint> points;
  ShapeReport shape;
};

/// Solves every grid point (OpenMP parallel; results in grid order) and
/// computes the shape certificates.  Tgrid must be strictly increasing and positive.
CurveScan scan_curve(const CurveContext& ctx, const std::vector<double>& Tgrid);
/// Same computation on one thread; kept as the reference for the parallel path.
CurveScan scan_curve_serial(const CurveContext& ctx, const std::vector<double>& Tgrid);
CurveScan scan_curve(const std::vector<double>& Tgrid, const Params& params,
                     const QuadratureConfig& cfg);

/// Shape certificates of an already solved, T-sorted list of points.
ShapeReport certify_shape(const FundamentalConstants& constants, const Params& params,
                          const std::vector<PhiPoint>& points);

}  // namespace tsl
