#pragma once

#include "tsl/quadrature.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace tsl {

/// Geometry hints for a function radial about the point center*e1.
struct RadialLayout {
  double center = 0.0;      // x1-coordinate of the radial center
  double scale = 1.0;       // characteristic radius of the integrand
  double nearGap = 0.0;     // > 0: integrand varies on this length just outside r = max(0, -center)
  double support = std::numeric_limits<double>::infinity();  // integrand is 0 for r >= support
  std::vector<double> breaks;  // extra radii where the integrand is not smooth
};

/// Integrand in terms of r = |x - center e1| and u = r - max(0, -center).
/// u is computed without cancellation, so integrands singular just inside
/// r = -center can be evaluated accurately from u.
using RadialFn = std::function<double(double r, double u)>;

/// Integral over H = {x1 > 0} of g(|x - center e1|), reduced to one radial
/// integral weighted by the fraction of each sphere lying in H.
QuadratureEstimate halfspace_radial_integral(const RadialFn& g, int n, const RadialLayout& layout,
                                             const QuadratureConfig& cfg);

/// Integral over the hyperplane {x1 = 0} of g(|x - center e1|).
QuadratureEstimate boundary_radial_integral(const RadialFn& g, int n, const RadialLayout& layout,
                                            const QuadratureConfig& cfg);

/// Integral over all of R^n of g(|x|); u = r.
QuadratureEstimate fullspace_radial_integral(const RadialFn& g, int n, const RadialLayout& layout,
                                             const QuadratureConfig& cfg);

/// Fraction of the sphere of radius r about center*e1 lying in H, in terms of
/// u = r - max(0, -center).
double halfspace_sphere_fraction(int n, double center, double r, double u);

}  // namespace tsl
