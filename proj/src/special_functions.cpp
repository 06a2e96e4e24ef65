#include "tsl/special_functions.hpp"
#include "tsl/params.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tsl {

Params make_params(int n, double p) {
  if (n < 2) throw std::invalid_argument("dimension n must be >= 2, got " + std::to_string(n));
  if (!(p > 1.0) || !(p < static_cast<double>(n)))
    throw std::invalid_argument("exponent p must lie in (1, n), got p = " + std::to_string(p));
  Params params;
  params.n = n;
  params.p = p;
  params.pStar = n * p / (n - p);
  params.pSharp = (n - 1) * p / (n - p);
  return params;
}

double sphere_area(int k) {
  if (k < 1) throw std::invalid_argument("sphere_area: k must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * k) / boost::math::tgamma(0.5 * k);
}

namespace {

// Half-sphere fraction of the cap {angle <= theta} for theta <= pi/2 with
// sin^2(theta) = sin2: (1/2) I_{sin2}((n-1)/2, 1/2).
double small_cap(int n, double sin2) {
  if (sin2 <= 0.0) return 0.0;
  if (sin2 >= 1.0) return 0.5;
  return 0.5 * boost::math::ibeta(0.5 * (n - 1), 0.5, sin2);
}

}  // namespace

double cap_fraction_from_cos(int n, double c) {
  if (n < 1) throw std::invalid_argument("cap fraction: n must be >= 1");
  if (c >= 1.0) return 0.0;
  if (c <= -1.0) return 1.0;
  if (n == 1) return c < 0.0 ? 0.5 : 0.0;  // S^0: only +e1 can be within angle < pi
  if (n == 2) return std::acos(c) / std::numbers::pi;
  if (n == 3) return 0.5 * (1.0 - c);
  const double sin2 = (1.0 - c) * (1.0 + c);
  const double half = small_cap(n, sin2);
  return c >= 0.0 ? half : 1.0 - half;
}

double cap_fraction_from_one_minus_cos(int n, double oneMinusCos) {
  if (oneMinusCos <= 0.0) return 0.0;
  if (oneMinusCos >= 2.0) return 1.0;
  if (oneMinusCos >= 0.5) return cap_fraction_from_cos(n, 1.0 - oneMinusCos);
  if (n == 1) return 0.0;
  // odd n have polynomial antiderivatives of sin^{n-2}
  if (n == 3) return 0.5 * oneMinusCos;
  if (n == 5) return 0.25 * oneMinusCos * oneMinusCos * (3.0 - oneMinusCos);
  const double sin2 = oneMinusCos * (2.0 - oneMinusCos);
  if (n == 2) return std::asin(std::sqrt(sin2)) / std::numbers::pi;
  return small_cap(n, sin2);
}

double cap_area_fraction(int n, double thetaMax) {
  if (n < 2) throw std::invalid_argument("cap_area_fraction: n must be >= 2");
  if (!(thetaMax >= 0.0 && thetaMax <= std::numbers::pi))
    throw std::invalid_argument("cap_area_fraction: thetaMax must lie in [0, pi]");
  if (n == 2) return thetaMax / std::numbers::pi;
  const double s = std::sin(thetaMax);
  const double half = small_cap(n, s * s);
  return thetaMax <= 0.5 * std::numbers::pi ? half : 1.0 - half;
}

double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smoothstep_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double u = t * (1.0 - t);
  return 30.0 * u * u;
}

double cutoff_eta(double r) { return smoothstep(2.0 - 2.0 * r); }

double cutoff_eta_derivative(double r) { return -2.0 * smoothstep_derivative(2.0 - 2.0 * r); }

}  // namespace tsl
