#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace tsl {

struct Bracket {
  double lo = 0.0;
  double hi = 1.0;
};

/// Raised for a bracket whose endpoint values share a sign (or lo >= hi).
class BracketError : public std::invalid_argument {
 public:
  BracketError(const std::string& what, double gLo, double gHi)
      : std::invalid_argument(what), gLo_(gLo), gHi_(gHi) {}
  double g_lo() const { return gLo_; }
  double g_hi() const { return gHi_; }

 private:
  double gLo_;
  double gHi_;
};

/// Root of a continuous g on a sign-changing bracket.  Regula falsi (Illinois
/// weighting) steps, with a bisection step whenever a step fails to halve the
/// bracket.  Stops once the bracket is narrower than tol or g hits zero.
double find_root_bracketed(const std::function<double(double)>& g, Bracket bracket, double tol);

struct ScalarMinimum {
  double argmin = 0.0;
  double min = 0.0;
};

/// Brent's golden-section / parabolic minimizer on [lo, hi].
ScalarMinimum minimize_scalar(const std::function<double(double)>& h, Bracket bracket, double tol);

}  // namespace tsl
