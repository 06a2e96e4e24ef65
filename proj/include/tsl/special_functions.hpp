#pragma once

namespace tsl {

/// Surface measure of the unit sphere S^{k-1} in R^k, i.e. 2 pi^{k/2} / Gamma(k/2).
/// k = 1 gives 2 (the two points of S^0).
double sphere_area(int k);

/// Fraction of S^{n-1} lying within angle thetaMax of e1.
/// Throws std::invalid_argument for n < 2 or thetaMax outside [0, pi].
double cap_area_fraction(int n, double thetaMax);

/// Same fraction parametrized by c = cos(thetaMax), clamped to [-1, 1].
/// Accepts n = 1 (S^0 = {+e1, -e1}) for slice computations.
double cap_fraction_from_cos(int n, double c);

/// Same fraction given 1 - cos(thetaMax) directly; avoids cancellation when the
/// cap is tiny.  oneMinusCos must lie in [0, 2].
double cap_fraction_from_one_minus_cos(int n, double oneMinusCos);

/// Quintic smoothstep: 0 for t <= 0, 1 for t >= 1, C^2 in between.
double smoothstep(double t);
double smoothstep_derivative(double t);

/// Radial cutoff profile: 1 on [0, 1/2], 0 on [1, inf), smoothstep in between.
double cutoff_eta(double r);
double cutoff_eta_derivative(double r);

}  // namespace tsl
