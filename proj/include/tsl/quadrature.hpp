#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsl {

enum class TailTransform { reciprocal, none };

struct QuadratureConfig {
  double relTol = 1e-10;
  double absTol = 1e-14;
  int maxDepth = 4000;  // maximum number of panel bisections
  TailTransform tailTransform = TailTransform::reciprocal;

  /// Throws std::invalid_argument unless both tolerances lie in (0, 1) and maxDepth >= 1.
  void validate() const;
};

struct QuadratureEstimate {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;

  double relative_error() const;
};

/// Raised when the adaptive scheme exhausts maxDepth bisections; carries the
/// best estimate reached.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double partial, double errorBound)
      : std::runtime_error(what), partial_(partial), errorBound_(errorBound) {}
  double partial() const { return partial_; }
  double error_bound() const { return errorBound_; }

 private:
  double partial_;
  double errorBound_;
};

/// How a segment's integration variable maps onto the physical variable x.
enum class SegmentMap {
  linear,          // x in [a, b]
  sqrtLeft,        // x = a + (b - a) u^2, u in [0, 1]; removes (x - a)^{k/2} kinks
  reciprocalTail,  // x = a / t, t in (0, 1]; b is ignored (infinite)
};

struct Segment {
  double a = 0.0;
  double b = 0.0;
  SegmentMap map = SegmentMap::linear;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over a union of
/// segments.  The tolerance max(absTol, relTol |I|) applies to the sum.
QuadratureEstimate integrate_segments(const std::function<double(double)>& f,
                                      std::span<const Segment> segments,
                                      const QuadratureConfig& cfg);

/// Adaptive integral of f over the finite interval [a, b].
QuadratureEstimate integrate(const std::function<double(double)>& f, double a, double b,
                             const QuadratureConfig& cfg);

/// Integral of f(r) r^weightPower over [lo, hi]; hi may be +infinity, in which
/// case the tail beyond lo + max(1, |lo|) is mapped through r = 1/t.
QuadratureEstimate integrate_radial(const std::function<double(double)>& f, int weightPower,
                                    double lo, double hi, const QuadratureConfig& cfg);

/// Builds segments covering [points.front(), end) where consecutive entries of
/// `points` delimit linear panels.  If end is infinite the final panel is a
/// reciprocal tail.  Panels starting at a point listed in `kinks` use the
/// sqrtLeft map.
std::vector<Segment> make_segments(std::vector<double> points, double end,
                                   std::span<const double> kinks = {});

}  // namespace tsl
