#pragma once

#include "tsl/params.hpp"
#include "tsl/quadrature.hpp"
#include "tsl/radial_reduction.hpp"

#include <string>

namespace tsl {

/// The three explicit extremal families.
///   sobolev:    U(r) = (1 + r^q)^{(p-n)/p}
///   escobar:    U(r) = r^{(p-n)/(p-1)}
///   hyperbolic: U(r) = (r^q - 1)^{(p-n)/p},  r > 1
/// with q = p/(p-1).
enum class ProfileFamily { sobolev, escobar, hyperbolic };

std::string family_name(ProfileFamily family);
ProfileFamily parse_family(const std::string& name);

struct ProfileValue {
  double value = 0.0;
  double gradMagnitude = 0.0;
};

/// U(r) and |U'(r)|.  Throws std::domain_error on the singular set
/// (r <= 0 for escobar, r <= 1 for hyperbolic) and for r < 0.
ProfileValue eval_profile(ProfileFamily family, double r, const Params& params);

/// A profile translated to be radial about s*e1.  Hyperbolic translates carry
/// the gap d = -1 - s explicitly so that profiles with s extremely close to -1
/// remain representable: everything near the boundary is evaluated from d.
class TranslatedProfile {
 public:
  /// Validates s against the family's singular set (escobar: s < 0,
  /// hyperbolic: s < -1).  Throws std::invalid_argument otherwise.
  TranslatedProfile(ProfileFamily family, double s, const Params& params);

  /// Hyperbolic translate with s = -1 - gap, gap > 0.
  static TranslatedProfile hyperbolic_with_gap(double gap, const Params& params);

  ProfileFamily family() const { return family_; }
  double s() const { return s_; }
  /// -1 - s for hyperbolic translates, 0 otherwise.
  double gap() const { return gap_; }
  const Params& params() const { return params_; }

  /// Value and gradient magnitude at distance r from s*e1, where
  /// u = r - max(0, -s) (see RadialFn).
  ProfileValue at(double r, double u) const;

  /// Value and gradient magnitude at a point x = (x1, rest) with |rest| = rho.
  ProfileValue at_point(double x1, double rho) const;

  RadialLayout layout() const;

 private:
  ProfileFamily family_;
  double s_;
  double gap_ = 0.0;
  Params params_;
};

struct HalfspaceNorms {
  double lpStarMass = 0.0;   // integral over H of U^{p*}
  double traceMass = 0.0;    // integral over the boundary of U^{p#}
  double gradEnergy = 0.0;   // integral over H of |grad U|^p
  double yMoment = 0.0;      // integral over H of U^{p*} |x - s e1|^{q}
  double sharpBulk = 0.0;    // integral over H of U^{p#}; only when requested
  double maxRelError = 0.0;  // largest relative quadrature error estimate
};

/// All half-space functionals of a translate by radial reduction.
HalfspaceNorms halfspace_norms(const TranslatedProfile& tp, const QuadratureConfig& cfg,
                               bool withSharpBulk = false);

/// Integral over all of R^n of U_S^{p*} and |grad U_S|^p.
struct FullspaceNorms {
  double lpStarMass = 0.0;
  double gradEnergy = 0.0;
  double maxRelError = 0.0;
};
FullspaceNorms fullspace_sobolev_norms(const Params& params, const QuadratureConfig& cfg);

/// A translate rescaled to unit L^{p*}(H) norm together with its constraint
/// and energy values.
struct NormalizedExtremal {
  TranslatedProfile base;
  double lpStarNormalizer = 1.0;  // ||tau_s U||_{L^{p*}(H)}
  double T = 0.0;                 // trace norm of the normalized function
  double phi = 0.0;               // gradient norm of the normalized function
  double yT = 0.0;                // (int U_T^{p*} |x - s e1|^q)^{(p-1)/p}
  double sharpBulk = 0.0;         // int_H U_T^{p#}, when requested
  double maxRelError = 0.0;
};

NormalizedExtremal normalize(const TranslatedProfile& tp, const QuadratureConfig& cfg,
                             bool withSharpBulk = false);

/// Normalized trace T of the translate.  Only the two constraint integrals
/// are evaluated.
double trace_ratio(const TranslatedProfile& tp, const QuadratureConfig& cfg);
double trace_ratio(ProfileFamily family, double s, const Params& params,
                   const QuadratureConfig& cfg);

}  // namespace tsl
