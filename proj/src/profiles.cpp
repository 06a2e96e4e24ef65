#include "tsl/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tsl {

std::string family_name(ProfileFamily family) {
  switch (family) {
    case ProfileFamily::sobolev: return "sobolev";
    case ProfileFamily::escobar: return "escobar";
    case ProfileFamily::hyperbolic: return "hyperbolic";
  }
  return "unknown";
}

ProfileFamily parse_family(const std::string& name) {
  if (name == "sobolev") return ProfileFamily::sobolev;
  if (name == "escobar") return ProfileFamily::escobar;
  if (name == "hyperbolic") return ProfileFamily::hyperbolic;
  throw std::invalid_argument("unknown profile family: " + name);
}

namespace {

// Value and gradient magnitude given r and, for the hyperbolic family,
// w = r^q - 1 computed by the caller.
ProfileValue eval_raw(ProfileFamily family, double r, double w, const Params& P) {
  const int n = P.n;
  const double p = P.p;
  const double k = (n - p) / (p - 1.0);
  const double e = (p - n) / p;
  ProfileValue out;
  switch (family) {
    case ProfileFamily::sobolev: {
      const double a = 1.0 + std::pow(r, P.conjugate());
      out.value = std::pow(a, e);
      out.gradMagnitude = k * out.value / a * std::pow(r, 1.0 / (p - 1.0));
      break;
    }
    case ProfileFamily::escobar:
      out.value = std::pow(r, -k);
      out.gradMagnitude = k * out.value / r;
      break;
    case ProfileFamily::hyperbolic:
      out.value = std::pow(w, e);
      out.gradMagnitude = k * out.value / w * std::pow(r, 1.0 / (p - 1.0));
      break;
  }
  return out;
}

}  // namespace

ProfileValue eval_profile(ProfileFamily family, double r, const Params& params) {
  if (!(r >= 0.0)) throw std::domain_error("eval_profile: negative radius");
  if (family == ProfileFamily::escobar && r <= 0.0)
    throw std::domain_error("eval_profile: escobar profile is singular at r = 0");
  if (family == ProfileFamily::hyperbolic && r <= 1.0)
    throw std::domain_error("eval_profile: hyperbolic profile requires r > 1");
  const double w = family == ProfileFamily::hyperbolic ? std::pow(r, params.conjugate()) - 1.0 : 0.0;
  return eval_raw(family, r, w, params);
}

TranslatedProfile::TranslatedProfile(ProfileFamily family, double s, const Params& params)
    : family_(family), s_(s), params_(params) {
  if (!std::isfinite(s)) throw std::invalid_argument("translation s must be finite");
  if (family == ProfileFamily::escobar && !(s < 0.0))
    throw std::invalid_argument("escobar translate requires s < 0");
  if (family == ProfileFamily::hyperbolic) {
    if (!(s < -1.0)) throw std::invalid_argument("hyperbolic translate requires s < -1");
    gap_ = -1.0 - s;
  }
}

TranslatedProfile TranslatedProfile::hyperbolic_with_gap(double gap, const Params& params) {
  if (!(gap > 0.0) || !std::isfinite(gap))
    throw std::invalid_argument("hyperbolic gap must be positive and finite");
  TranslatedProfile tp(ProfileFamily::hyperbolic, -1.0 - std::max(gap, 1.0), params);
  tp.s_ = -1.0 - gap;
  tp.gap_ = gap;
  return tp;
}

ProfileValue TranslatedProfile::at(double r, double u) const {
  if (family_ == ProfileFamily::hyperbolic) {
    const double delta = gap_ + u;  // r - 1
    const double w = std::expm1(params_.conjugate() * std::log1p(delta));
    return eval_raw(family_, r, w, params_);
  }
  return eval_raw(family_, r, 0.0, params_);
}

ProfileValue TranslatedProfile::at_point(double x1, double rho) const {
  const double dx = x1 - s_;
  const double r = std::sqrt(dx * dx + rho * rho);
  double u = r;
  if (s_ < 0.0) u = (x1 * (x1 - 2.0 * s_) + rho * rho) / (r - s_);
  return at(r, u);
}

RadialLayout TranslatedProfile::layout() const {
  RadialLayout layout;
  layout.center = s_;
  layout.scale = 1.0;
  layout.nearGap = family_ == ProfileFamily::hyperbolic ? gap_ : 0.0;
  return layout;
}

HalfspaceNorms halfspace_norms(const TranslatedProfile& tp, const QuadratureConfig& cfg,
                               bool withSharpBulk) {
  const Params& P = tp.params();
  const int n = P.n;
  const double q = P.conjugate();
  const RadialLayout layout = tp.layout();
  HalfspaceNorms out;
  auto track = [&](const QuadratureEstimate& est) {
    out.maxRelError = std::max(out.maxRelError, est.relative_error());
    return est.value;
  };
  out.lpStarMass = track(halfspace_radial_integral(
      [&](double r, double u) { return std::pow(tp.at(r, u).value, P.pStar); }, n, layout, cfg));
  out.traceMass = track(boundary_radial_integral(
      [&](double r, double u) { return std::pow(tp.at(r, u).value, P.pSharp); }, n, layout, cfg));
  out.gradEnergy = track(halfspace_radial_integral(
      [&](double r, double u) { return std::pow(tp.at(r, u).gradMagnitude, P.p); }, n, layout,
      cfg));
  out.yMoment = track(halfspace_radial_integral(
      [&](double r, double u) { return std::pow(tp.at(r, u).value, P.pStar) * std::pow(r, q); }, n,
      layout, cfg));
  if (withSharpBulk) {
    out.sharpBulk = track(halfspace_radial_integral(
        [&](double r, double u) { return std::pow(tp.at(r, u).value, P.pSharp); }, n, layout,
        cfg));
  }
  return out;
}

FullspaceNorms fullspace_sobolev_norms(const Params& P, const QuadratureConfig& cfg) {
  RadialLayout layout;
  FullspaceNorms out;
  auto track = [&](const QuadratureEstimate& est) {
    out.maxRelError = std::max(out.maxRelError, est.relative_error());
    return est.value;
  };
  out.lpStarMass = track(fullspace_radial_integral(
      [&](double r, double) {
        return std::pow(eval_profile(ProfileFamily::sobolev, r, P).value, P.pStar);
      },
      P.n, layout, cfg));
  out.gradEnergy = track(fullspace_radial_integral(
      [&](double r, double) {
        return std::pow(eval_profile(ProfileFamily::sobolev, r, P).gradMagnitude, P.p);
      },
      P.n, layout, cfg));
  return out;
}

NormalizedExtremal normalize(const TranslatedProfile& tp, const QuadratureConfig& cfg,
                             bool withSharpBulk) {
  const Params& P = tp.params();
  const HalfspaceNorms norms = halfspace_norms(tp, cfg, withSharpBulk);
  NormalizedExtremal out{tp};
  out.lpStarNormalizer = std::pow(norms.lpStarMass, 1.0 / P.pStar);
  out.T = std::pow(norms.traceMass, 1.0 / P.pSharp) / out.lpStarNormalizer;
  out.phi = std::pow(norms.gradEnergy, 1.0 / P.p) / out.lpStarNormalizer;
  // the moment integrand is homogeneous of degree p* in the function
  out.yT = std::pow(norms.yMoment / norms.lpStarMass, (P.p - 1.0) / P.p);
  if (withSharpBulk) out.sharpBulk = norms.sharpBulk / std::pow(out.lpStarNormalizer, P.pSharp);
  out.maxRelError = norms.maxRelError;
  return out;
}

double trace_ratio(const TranslatedProfile& tp, const QuadratureConfig& cfg) {
  const Params& P = tp.params();
  const RadialLayout layout = tp.layout();
  const double mass =
      halfspace_radial_integral(
          [&](double r, double u) { return std::pow(tp.at(r, u).value, P.pStar); }, P.n, layout,
          cfg)
          .value;
  const double trace =
      boundary_radial_integral(
          [&](double r, double u) { return std::pow(tp.at(r, u).value, P.pSharp); }, P.n, layout,
          cfg)
          .value;
  return std::pow(trace, 1.0 / P.pSharp) / std::pow(mass, 1.0 / P.pStar);
}

double trace_ratio(ProfileFamily family, double s, const Params& params,
                   const QuadratureConfig& cfg) {
  return trace_ratio(TranslatedProfile(family, s, params), cfg);
}

}  // namespace tsl
