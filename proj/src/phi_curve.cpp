#include "tsl/phi_curve.hpp"
#include "tsl/root_find.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tsl {

namespace {

constexpr double kSobolevTableRadius = 1000.0;
constexpr double kMinLogGap = -138.0;  // gap ~ 1e-60; keeps U^{p*} finite for n <= 5
constexpr double kMaxLogGap = 6.9;     // gap ~ 1e3; beyond it T(gap) - TE drowns in quadrature noise
constexpr int kTableSize = 81;

void require_decreasing(const std::vector<double>& x, const std::vector<double>& T,
                        const char* what) {
  for (std::size_t i = 1; i < T.size(); ++i) {
    if (!(T[i] < T[i - 1])) {
      std::ostringstream os;
      os << what << ": T is not decreasing between parameters " << x[i - 1] << " and " << x[i]
         << " (T = " << T[i - 1] << ", " << T[i] << ")";
      throw MonotonicityError(os.str());
    }
  }
}

// Bracket [lo, hi] in the table's parameter with T(lo) >= target >= T(hi);
// returns false if target lies outside the table.
bool table_bracket(const std::vector<double>& x, const std::vector<double>& T, double target,
                   Bracket& out) {
  if (target > T.front() || target < T.back()) return false;
  // T decreasing: first index with T[i] <= target
  const auto it = std::lower_bound(T.begin(), T.end(), target, std::greater<double>());
  const std::size_t i = static_cast<std::size_t>(it - T.begin());
  if (i == 0) {
    out = {x[0], x[1]};
  } else {
    out = {x[i - 1], x[i]};
  }
  return true;
}

}  // namespace

TranslatedProfile SolvedS::profile() const {
  if (regime == ProfileFamily::hyperbolic) return TranslatedProfile::hyperbolic_with_gap(gap, params);
  return TranslatedProfile(regime, s, params);
}

double CurveContext::sobolev_trace(double s) const {
  return trace_ratio(TranslatedProfile(ProfileFamily::sobolev, s, params_), cfg_);
}

double CurveContext::hyperbolic_trace(double logGap) const {
  return trace_ratio(TranslatedProfile::hyperbolic_with_gap(std::exp(logGap), params_), cfg_);
}

CurveContext::CurveContext(const Params& params, const QuadratureConfig& cfg)
    : params_(params), cfg_(cfg) {
  cfg_.validate();
  const FullspaceNorms full = fullspace_sobolev_norms(params_, cfg_);
  constants_.S = std::pow(full.gradEnergy, 1.0 / params_.p) / std::pow(full.lpStarMass, 1.0 / params_.pStar);
  constants_.sobolevFloor = constants_.S / std::pow(2.0, 1.0 / params_.n);

  const NormalizedExtremal centred = normalize(TranslatedProfile(ProfileFamily::sobolev, 0.0, params_), cfg_);
  constants_.T0 = centred.T;

  // The Escobar translate at s = -1: trace norm and gradient norm of the
  // unnormalized profile give E directly.
  const TranslatedProfile escobar(ProfileFamily::escobar, -1.0, params_);
  const HalfspaceNorms en = halfspace_norms(escobar, cfg_);
  constants_.E = std::pow(en.gradEnergy, 1.0 / params_.p) / std::pow(en.traceMass, 1.0 / params_.pSharp);
  const NormalizedExtremal escNorm = normalize(escobar, cfg_);
  constants_.TE = escNorm.T;
  constants_.phiTE = escNorm.phi;

  const double xMax = std::asinh(kSobolevTableRadius);
  for (int i = 0; i < kTableSize; ++i) {
    const double s = std::sinh(-xMax + 2.0 * xMax * i / (kTableSize - 1));
    sobolevS_.push_back(s);
    sobolevT_.push_back(sobolev_trace(s));
  }
  require_decreasing(sobolevS_, sobolevT_, "sobolev regime");
  for (int i = 0; i < kTableSize; ++i) {
    const double lg = kMinLogGap + (kMaxLogGap - kMinLogGap) * i / (kTableSize - 1);
    hyperLogGap_.push_back(lg);
    hyperT_.push_back(hyperbolic_trace(lg));
  }
  require_decreasing(hyperLogGap_, hyperT_, "hyperbolic regime");
}

SolvedS CurveContext::solve_s_for_T(double T) const {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("solve_s_for_T: T must be positive");
  SolvedS out;
  out.params = params_;
  const double TE = constants_.TE;
  if (std::abs(T - TE) <= regime_tolerance()) {
    out.regime = ProfileFamily::escobar;
    out.s = -1.0;
    return out;
  }
  if (T < TE) {
    out.regime = ProfileFamily::sobolev;
    auto g = [&](double s) { return sobolev_trace(s) - T; };
    Bracket br;
    if (!table_bracket(sobolevS_, sobolevT_, T, br)) {
      // geometric expansion beyond the table
      if (T > sobolevT_.front()) {
        double lo = sobolevS_.front();
        double hi = lo;
        while (g(lo) < 0.0) {
          hi = lo;
          lo *= 4.0;
          if (lo < -1e9) {
            std::ostringstream os;
            os << "solve_s_for_T: no sobolev bracket for T = " << T << ", last bracket [" << lo
               << ", " << hi << "]";
            throw std::runtime_error(os.str());
          }
        }
        br = {lo, hi};
      } else {
        double hi = sobolevS_.back();
        double lo = hi;
        while (g(hi) > 0.0) {
          lo = hi;
          hi *= 4.0;
          if (hi > 1e12) {
            std::ostringstream os;
            os << "solve_s_for_T: no sobolev bracket for T = " << T << ", last bracket [" << lo
               << ", " << hi << "]";
            throw std::runtime_error(os.str());
          }
        }
        br = {lo, hi};
      }
    }
    const double tol = 1e-13 * std::max(1.0, std::max(std::abs(br.lo), std::abs(br.hi)));
    out.s = find_root_bracketed(g, br, tol);
    return out;
  }
  out.regime = ProfileFamily::hyperbolic;
  auto g = [&](double lg) { return hyperbolic_trace(lg) - T; };
  Bracket br;
  if (!table_bracket(hyperLogGap_, hyperT_, T, br)) {
    if (T > hyperT_.front()) {
      std::ostringstream os;
      os << "solve_s_for_T: T = " << T << " exceeds the representable hyperbolic range (T <= "
         << hyperT_.front() << ")";
      throw std::runtime_error(os.str());
    }
    double hi = kMaxLogGap;
    double lo = hi;
    while (g(hi) > 0.0) {
      lo = hi;
      hi += 2.0;
      if (hi > 40.0) {
        std::ostringstream os;
        os << "solve_s_for_T: no hyperbolic bracket for T = " << T << ", last log-gap bracket ["
           << lo << ", " << hi << "]";
        throw std::runtime_error(os.str());
      }
    }
    br = {lo, hi};
  }
  const double lg = find_root_bracketed(g, br, 1e-13);
  out.gap = std::exp(lg);
  out.s = -1.0 - out.gap;
  return out;
}

PhiPoint CurveContext::phi_of_T(double T) const {
  const SolvedS sol = solve_s_for_T(T);
  const NormalizedExtremal ne = normalize(sol.profile(), cfg_);
  PhiPoint pt;
  pt.T = T;
  pt.regime = sol.regime;
  pt.s = sol.s;
  pt.gap = sol.gap;
  pt.phi = ne.phi;
  pt.yT = ne.yT;
  pt.measuredT = ne.T;
  pt.relError = ne.maxRelError;
  return pt;
}

double CurveContext::phi_value(double T) const {
  if (T == 0.0) return constants_.S;
  return phi_of_T(T).phi;
}

void CurveContext::estimate_t_star(int count) {
  if (count < 4) throw std::invalid_argument("estimate_t_star: need at least 4 points");
  const double h = constants_.T0 / count;
  std::vector<double> phi(count - 1);
  for (int i = 1; i < count; ++i) phi[i - 1] = phi_of_T(h * i).phi;
  constants_.TStarEstimate = 0.0;
  constants_.TStarError = 0.0;
  int prevSign = 0;
  for (int i = 1; i + 1 < count - 1; ++i) {
    const double d2 = phi[i + 1] - 2.0 * phi[i] + phi[i - 1];
    const int sign = d2 > 0.0 ? 1 : (d2 < 0.0 ? -1 : 0);
    if (prevSign != 0 && sign != 0 && sign != prevSign) {
      // sign change between second differences centred at points i and i+1
      constants_.TStarEstimate = h * (i + 0.5);
      constants_.TStarError = h;
      return;
    }
    if (sign != 0) prevSign = sign;
  }
}

FundamentalConstants fundamental_constants(const Params& params, const QuadratureConfig& cfg) {
  CurveContext ctx(params, cfg);
  ctx.estimate_t_star();
  return ctx.constants();
}

SolvedS solve_s_for_T(double T, const Params& params, const QuadratureConfig& cfg) {
  return CurveContext(params, cfg).solve_s_for_T(T);
}

PhiPoint phi_of_T(double T, const Params& params, const QuadratureConfig& cfg) {
  return CurveContext(params, cfg).phi_of_T(T);
}

IdentityCheck verify_transport_identity(const CurveContext& ctx, double T) {
  const Params& P = ctx.params();
  const SolvedS sol = ctx.solve_s_for_T(T);
  const TranslatedProfile tp = sol.profile();
  const NormalizedExtremal ne = normalize(tp, ctx.config(), true);
  IdentityCheck out;
  out.T = T;
  out.s = sol.s;
  const double rhs = P.n * ne.sharpBulk;
  const double moving = std::abs(sol.s) * std::pow(ne.T, P.pSharp);
  out.condition = moving / rhs;
  out.residual = std::abs(P.pSharp * ne.phi * ne.yT + sol.s * std::pow(ne.T, P.pSharp) - rhs) / rhs;
  // The two large terms cancel to leave rhs; double precision resolves the
  // residual only to about condition * quadrature tolerance.
  const double resolvable = 10.0 * out.condition * std::max(ctx.config().relTol, ne.maxRelError);
  if (resolvable > 1e-9) {
    const double relTol = std::clamp(1e-12 / out.condition, 1e-16, 1e-14);
    out.residual = transport_identity_residual_extended(tp, relTol);
    out.extended = true;
  }
  return out;
}

IdentityCheck verify_transport_identity(double T, const Params& params, const QuadratureConfig& cfg) {
  return verify_transport_identity(CurveContext(params, cfg), T);
}

void resolve_asymptote_excess(const CurveContext& ctx, PhiPoint& pt) {
  const Params& P = ctx.params();
  const double plain = pt.phi / (std::pow(pt.measuredT, P.pSharp) / P.pSharp) - 1.0;
  const double resolvable = 1e3 * std::max({pt.relError, ctx.config().relTol, 1e-13});
  pt.excessExtended = false;
  pt.asymptoteExcess = plain;
  if (pt.regime != ProfileFamily::hyperbolic || plain > resolvable) return;
  const SolvedS sol{pt.regime, pt.s, pt.gap, P};
  pt.asymptoteExcess = asymptote_excess_extended(sol.profile(), 1e-7);
  pt.excessExtended = true;
}

ShapeReport certify_shape(const FundamentalConstants& C, const Params& P,
                          const std::vector<PhiPoint>& pts) {
  ShapeReport rep;
  auto fail = [&](bool& flag, const char* name, std::size_t i, double value) {
    flag = false;
    rep.failures.push_back({name, i, pts[i].T, value});
  };
  auto noise = [&](std::size_t i) { return 4.0 * std::max(pts[i].relError, 1e-10) * pts[i].phi; };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double T = pts[i].T;
    const double phi = pts[i].phi;
    const double excess = std::isnan(pts[i].asymptoteExcess)
                              ? phi / (std::pow(T, P.pSharp) / P.pSharp) - 1.0
                              : pts[i].asymptoteExcess;
    if (!(excess > 0.0)) fail(rep.aboveAsymptote, "above_asymptote", i, excess);
    const double lower = std::max(C.E * T, C.sobolevFloor);
    if (phi < lower - noise(i)) fail(rep.aboveLowerBounds, "above_lower_bounds", i, phi - lower);
    if (i + 1 < pts.size()) {
      const double diff = pts[i + 1].phi - phi;
      if (pts[i + 1].T <= C.T0 && !(diff < 0.0)) fail(rep.decreasingBelowT0, "decreasing_below_T0", i, diff);
      if (pts[i + 1].T < C.TE && !(diff < 0.0)) rep.decreasingBelowTE = false;
      if (T >= C.T0 && !(diff > 0.0)) fail(rep.increasingAboveT0, "increasing_above_T0", i, diff);
      if (i > 0 && pts[i - 1].T >= C.T0) {
        const double h1 = T - pts[i - 1].T;
        const double h2 = pts[i + 1].T - T;
        const double d2 = 2.0 * ((pts[i + 1].phi - phi) / h2 - (phi - pts[i - 1].phi) / h1) / (h1 + h2);
        const double tol = 2.0 * (2.0 * noise(i) / h2 + 2.0 * noise(i) / h1) / (h1 + h2);
        if (d2 < -tol) fail(rep.convexAboveT0, "convex_above_T0", i, d2);
      }
    }
  }
  // compared through the excess ratio - 1 so the far tail stays resolved
  double prevExcess = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].T < C.TE) continue;
    const double excess = std::isnan(pts[i].asymptoteExcess)
                              ? pts[i].phi / (std::pow(pts[i].T, P.pSharp) / P.pSharp) - 1.0
                              : pts[i].asymptoteExcess;
    if (!(excess < prevExcess) || !(excess > 0.0)) fail(rep.tailRatioDecreasing, "tail_ratio_decreasing", i, excess);
    prevExcess = excess;
    rep.lastTailRatio = 1.0 + excess;
    rep.lastTailExcess = excess;
  }
  return rep;
}

namespace {

void check_grid(const std::vector<double>& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw std::invalid_argument("scan_curve: grid values must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("scan_curve: grid must be strictly increasing");
  }
}

}  // namespace

CurveScan scan_curve(const CurveContext& ctx, const std::vector<double>& Tgrid) {
  check_grid(Tgrid);
  CurveScan scan;
  scan.constants = ctx.constants();
  scan.points.resize(Tgrid.size());
  const long count = static_cast<long>(Tgrid.size());
  std::vector<std::string> errors(Tgrid.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      scan.points[i] = ctx.phi_of_T(Tgrid[i]);
      resolve_asymptote_excess(ctx, scan.points[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  scan.shape = certify_shape(scan.constants, ctx.params(), scan.points);
  return scan;
}

CurveScan scan_curve_serial(const CurveContext& ctx, const std::vector<double>& Tgrid) {
  check_grid(Tgrid);
  CurveScan scan;
  scan.constants = ctx.constants();
  for (double T : Tgrid) {
    scan.points.push_back(ctx.phi_of_T(T));
    resolve_asymptote_excess(ctx, scan.points.back());
  }
  scan.shape = certify_shape(scan.constants, ctx.params(), scan.points);
  return scan;
}

CurveScan scan_curve(const std::vector<double>& Tgrid, const Params& params,
                     const QuadratureConfig& cfg) {
  return scan_curve(CurveContext(params, cfg), Tgrid);
}

}  // namespace tsl
