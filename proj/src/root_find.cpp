#include "tsl/root_find.hpp"

#include <cmath>
#include <sstream>

namespace tsl {

namespace {

void check_order(const Bracket& b) {
  if (!(b.lo < b.hi)) {
    std::ostringstream os;
    os << "invalid bracket: lo = " << b.lo << " is not below hi = " << b.hi;
    throw BracketError(os.str(), 0.0, 0.0);
  }
}

}  // namespace

double find_root_bracketed(const std::function<double(double)>& g, Bracket bracket, double tol) {
  check_order(bracket);
  if (!(tol > 0.0)) throw std::invalid_argument("find_root_bracketed: tol must be positive");
  double a = bracket.lo;
  double b = bracket.hi;
  double fa = g(a);
  double fb = g(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::signbit(fa) == std::signbit(fb) || std::isnan(fa) || std::isnan(fb)) {
    std::ostringstream os;
    os.precision(17);
    os << "bracket [" << a << ", " << b << "] does not change sign: g(lo) = " << fa
       << ", g(hi) = " << fb;
    throw BracketError(os.str(), fa, fb);
  }
  int side = 0;  // which endpoint moved last step (Illinois weighting)
  bool bisectNext = false;
  for (int iter = 0; iter < 500 && (b - a) > tol; ++iter) {
    const double widthBefore = b - a;
    double x = 0.5 * (a + b);
    if (!bisectNext) {
      const double falsi = (a * fb - b * fa) / (fb - fa);
      if (falsi > a && falsi < b) x = falsi;
    }
    const double fx = g(x);
    if (fx == 0.0) return x;
    if (std::signbit(fx) == std::signbit(fa)) {
      a = x;
      fa = fx;
      if (side == -1) fb *= 0.5;
      side = -1;
    } else {
      b = x;
      fb = fx;
      if (side == 1) fa *= 0.5;
      side = 1;
    }
    bisectNext = (b - a) > 0.5 * widthBefore;
  }
  return std::abs(fa) < std::abs(fb) ? a : b;
}

ScalarMinimum minimize_scalar(const std::function<double(double)>& h, Bracket bracket, double tol) {
  check_order(bracket);
  if (!(tol > 0.0)) throw std::invalid_argument("minimize_scalar: tol must be positive");
  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  double a = bracket.lo;
  double b = bracket.hi;
  double x = a + golden * (b - a);
  double w = x;
  double v = x;
  double fx = h(x);
  double fw = fx;
  double fv = fx;
  double d = 0.0;
  double e = 0.0;
  for (int iter = 0; iter < 500; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol1 = 1e-3 * tol + 0.25 * tol;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a) || (b - a) <= tol) break;
    bool parabolic = false;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double pp = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) pp = -pp;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (std::abs(pp) < std::abs(0.5 * q * etemp) && pp > q * (a - x) && pp < q * (b - x)) {
        d = pp / q;
        const double u = x + d;
        if ((u - a) < tol2 || (b - u) < tol2) d = (x < m) ? tol1 : -tol1;
        parabolic = true;
      }
    }
    if (!parabolic) {
      e = (x < m) ? b - x : a - x;
      d = golden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = h(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  // The interior search never evaluates the endpoints; keep them as candidates.
  ScalarMinimum best{x, fx};
  for (double end : {bracket.lo, bracket.hi}) {
    const double fe = h(end);
    if (fe < best.min) best = {end, fe};
  }
  return best;
}

}  // namespace tsl
