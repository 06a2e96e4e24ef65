#include "tsl/radial_reduction.hpp"
#include "tsl/special_functions.hpp"

#include <algorithm>
#include <cmath>

namespace tsl {

namespace {

// Graded points h, 4h, 16h, ... below limit (all offsets from the inner edge).
void add_graded(std::vector<double>& pts, double h, double limit) {
  if (!(h > 0.0)) return;
  for (double x = h; x < limit; x *= 4.0) pts.push_back(x);
}

}  // namespace

double halfspace_sphere_fraction(int n, double center, double r, double u) {
  if (center > 0.0) {
    if (r <= center) return 1.0;
    // complement is the cap about -e1 with 1 - cos = 1 - center / r
    return 1.0 - cap_fraction_from_one_minus_cos(n, (r - center) / r);
  }
  if (center == 0.0) return 0.5;
  // cos(thetaMax) = |center| / r, so 1 - cos = u / r
  return cap_fraction_from_one_minus_cos(n, u / r);
}

QuadratureEstimate halfspace_radial_integral(const RadialFn& g, int n, const RadialLayout& layout,
                                             const QuadratureConfig& cfg) {
  const double c = layout.center;
  const double a0 = std::max(0.0, -c);
  const double uEnd = layout.support - a0;
  if (!(uEnd > 0.0)) return {};
  const double area = sphere_area(n);
  const double L = std::max(layout.scale, std::abs(c));

  std::vector<double> pts{0.0};
  std::vector<double> kinks;
  if (c > 0.0) {
    pts.push_back(c);
    kinks.push_back(c);
    if (layout.scale < c) pts.push_back(layout.scale);
  } else if (c < 0.0) {
    kinks.push_back(0.0);
  }
  const double inner = c > 0.0 ? c : 0.0;
  if (c < 0.0) add_graded(pts, layout.nearGap, L);
  pts.push_back(inner + L);
  for (double rb : layout.breaks) pts.push_back(rb - a0);
  if (std::isfinite(layout.support)) pts.push_back(0.5 * layout.support - a0);
  std::vector<double> valid;
  for (double x : pts)
    if (x >= 0.0) valid.push_back(x);
  const auto segs = make_segments(valid, uEnd, kinks);

  auto integrand = [&](double u) {
    const double r = a0 + u;
    if (r <= 0.0) return 0.0;
    const double frac = halfspace_sphere_fraction(n, c, r, u);
    if (frac == 0.0) return 0.0;
    return g(r, u) * area * std::pow(r, n - 1) * frac;
  };
  return integrate_segments(integrand, segs, cfg);
}

QuadratureEstimate boundary_radial_integral(const RadialFn& g, int n, const RadialLayout& layout,
                                            const QuadratureConfig& cfg) {
  const double c = layout.center;
  const double a0 = std::max(0.0, -c);
  const double c2 = c * c;
  if (layout.support <= std::abs(c)) return {};
  const double rhoEnd =
      std::isfinite(layout.support) ? std::sqrt(layout.support * layout.support - c2)
                                    : layout.support;
  const double area = sphere_area(n - 1);
  const double L = std::max(layout.scale, std::abs(c));

  std::vector<double> pts{0.0};
  if (layout.nearGap > 0.0) add_graded(pts, std::sqrt(2.0 * std::max(a0, 1e-300) * layout.nearGap), L);
  pts.push_back(L);
  auto rho_at = [&](double r) { return r > std::abs(c) ? std::sqrt(r * r - c2) : -1.0; };
  for (double rb : layout.breaks) pts.push_back(rho_at(rb));
  if (std::isfinite(layout.support)) pts.push_back(rho_at(0.5 * layout.support));
  std::vector<double> valid;
  for (double x : pts)
    if (x >= 0.0) valid.push_back(x);
  const auto segs = make_segments(valid, rhoEnd);

  auto integrand = [&](double rho) {
    const double r = std::sqrt(c2 + rho * rho);
    const double u = c < 0.0 ? rho * rho / (r + a0) : r;
    const double w = n == 2 ? 1.0 : std::pow(rho, n - 2);
    return g(r, u) * area * w;
  };
  return integrate_segments(integrand, segs, cfg);
}

QuadratureEstimate fullspace_radial_integral(const RadialFn& g, int n, const RadialLayout& layout,
                                             const QuadratureConfig& cfg) {
  const double area = sphere_area(n);
  std::vector<double> pts{0.0, layout.scale};
  for (double rb : layout.breaks) pts.push_back(rb);
  if (std::isfinite(layout.support)) pts.push_back(0.5 * layout.support);
  const auto segs = make_segments(pts, layout.support);
  auto integrand = [&](double r) { return g(r, r) * area * std::pow(r, n - 1); };
  return integrate_segments(integrand, segs, cfg);
}

}  // namespace tsl
