#pragma once

namespace tsl {

/// Dimension and integrability exponent of the half-space problem together
/// with the two critical exponents they determine.
struct Params {
  int n = 3;
  double p = 2.0;
  double pStar = 6.0;   // np/(n-p), bulk exponent
  double pSharp = 4.0;  // (n-1)p/(n-p), trace exponent

  /// Hoelder conjugate p/(p-1); the radial power inside every profile.
  double conjugate() const { return p / (p - 1.0); }
};

/// Validates 2 <= n and 1 < p < n and fills in the critical exponents.
/// Throws std::invalid_argument otherwise.
Params make_params(int n, double p);

}  // namespace tsl
