#include "tsl/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace tsl {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  int segment;
  bool frozen;
};

// Integrand in the segment's own variable, including the Jacobian.
double mapped_value(const std::function<double(double)>& f, const Segment& seg, double t) {
  switch (seg.map) {
    case SegmentMap::linear:
      return f(t);
    case SegmentMap::sqrtLeft: {
      const double w = seg.b - seg.a;
      const double x = seg.a + w * t * t;
      if (t == 0.0) return 0.0;
      return f(x) * 2.0 * w * t;
    }
    case SegmentMap::reciprocalTail: {
      const double x = seg.a / t;
      return f(x) * seg.a / (t * t);
    }
  }
  return 0.0;
}

Panel gauss_kronrod(const std::function<double(double)>& f, const Segment& seg, int segIndex,
                    double lo, double hi) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double centr = 0.5 * (lo + hi);
  const double hlgth = 0.5 * (hi - lo);
  std::array<double, 7> fv1{};
  std::array<double, 7> fv2{};
  const double fc = mapped_value(f, seg, centr);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double absc = hlgth * kXgk[jtw];
    const double f1 = mapped_value(f, seg, centr - absc);
    const double f2 = mapped_value(f, seg, centr + absc);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double absc = hlgth * kXgk[jtwm1];
    const double f1 = mapped_value(f, seg, centr - absc);
    const double f2 = mapped_value(f, seg, centr + absc);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  const double result = resk * hlgth;
  resabs *= std::abs(hlgth);
  resasc *= std::abs(hlgth);
  double abserr = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && abserr != 0.0)
    abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    abserr = std::max(eps * 50.0 * resabs, abserr);
  if (!std::isfinite(result) || !std::isfinite(abserr))
    throw QuadratureError("non-finite integrand value", result, abserr);
  return Panel{lo, hi, result, abserr, segIndex, false};
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(relTol > 0.0 && relTol < 1.0)) throw std::invalid_argument("relTol must lie in (0, 1)");
  if (!(absTol > 0.0 && absTol < 1.0)) throw std::invalid_argument("absTol must lie in (0, 1)");
  if (maxDepth < 1) throw std::invalid_argument("maxDepth must be >= 1");
}

double QuadratureEstimate::relative_error() const {
  if (value == 0.0) return error == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return error / std::abs(value);
}

QuadratureEstimate integrate_segments(const std::function<double(double)>& f,
                                      std::span<const Segment> segments,
                                      const QuadratureConfig& cfg) {
  cfg.validate();
  std::vector<Panel> panels;
  panels.reserve(64);
  for (int i = 0; i < static_cast<int>(segments.size()); ++i) {
    const Segment& seg = segments[i];
    switch (seg.map) {
      case SegmentMap::linear:
        if (!(seg.b > seg.a)) continue;
        if (!std::isfinite(seg.b) || !std::isfinite(seg.a))
          throw std::invalid_argument("linear segment must be finite");
        panels.push_back(gauss_kronrod(f, seg, i, seg.a, seg.b));
        break;
      case SegmentMap::sqrtLeft:
        if (!(seg.b > seg.a)) continue;
        panels.push_back(gauss_kronrod(f, seg, i, 0.0, 1.0));
        break;
      case SegmentMap::reciprocalTail:
        if (cfg.tailTransform == TailTransform::none)
          throw std::invalid_argument("infinite domain requires the reciprocal tail transform");
        if (!(seg.a > 0.0)) throw std::invalid_argument("reciprocal tail must start at a > 0");
        panels.push_back(gauss_kronrod(f, seg, i, 0.0, 1.0));
        break;
    }
  }

  int subdivisions = 0;
  while (true) {
    double total = 0.0;
    double err = 0.0;
    int worst = -1;
    for (int i = 0; i < static_cast<int>(panels.size()); ++i) {
      total += panels[i].value;
      err += panels[i].error;
      if (!panels[i].frozen && (worst < 0 || panels[i].error > panels[worst].error)) worst = i;
    }
    const double target = std::max(cfg.absTol, cfg.relTol * std::abs(total));
    if (err <= target) return QuadratureEstimate{total, err, subdivisions};
    if (worst < 0 || subdivisions >= cfg.maxDepth)
      throw QuadratureError("adaptive quadrature did not converge after " +
                                std::to_string(subdivisions) + " subdivisions",
                            total, err);
    const Panel p = panels[worst];
    const double mid = 0.5 * (p.lo + p.hi);
    if (!(mid > p.lo && mid < p.hi) || (p.hi - p.lo) < 1e-15 * (std::abs(p.lo) + std::abs(p.hi))) {
      panels[worst].frozen = true;
      continue;
    }
    const Segment& seg = segments[p.segment];
    panels[worst] = gauss_kronrod(f, seg, p.segment, p.lo, mid);
    panels.push_back(gauss_kronrod(f, seg, p.segment, mid, p.hi));
    ++subdivisions;
  }
}

QuadratureEstimate integrate(const std::function<double(double)>& f, double a, double b,
                             const QuadratureConfig& cfg) {
  if (b < a) {
    QuadratureEstimate flipped = integrate(f, b, a, cfg);
    flipped.value = -flipped.value;
    return flipped;
  }
  const std::array<Segment, 1> seg = {Segment{a, b, SegmentMap::linear}};
  return integrate_segments(f, seg, cfg);
}

std::vector<Segment> make_segments(std::vector<double> points, double end,
                                   std::span<const double> kinks) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<double> kept;
  for (double x : points)
    if (x < end && std::isfinite(x)) kept.push_back(x);
  std::vector<Segment> segs;
  if (kept.empty()) return segs;
  auto is_kink = [&](double x) {
    return std::find(kinks.begin(), kinks.end(), x) != kinks.end();
  };
  for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
    segs.push_back(Segment{kept[i], kept[i + 1],
                           is_kink(kept[i]) ? SegmentMap::sqrtLeft : SegmentMap::linear});
  }
  const double last = kept.back();
  if (std::isinf(end)) {
    if (last <= 0.0) {
      segs.push_back(Segment{last, 1.0, is_kink(last) ? SegmentMap::sqrtLeft : SegmentMap::linear});
      segs.push_back(Segment{1.0, end, SegmentMap::reciprocalTail});
    } else {
      segs.push_back(Segment{last, end, SegmentMap::reciprocalTail});
    }
  } else if (end > last) {
    segs.push_back(Segment{last, end, is_kink(last) ? SegmentMap::sqrtLeft : SegmentMap::linear});
  }
  return segs;
}

QuadratureEstimate integrate_radial(const std::function<double(double)>& f, int weightPower,
                                    double lo, double hi, const QuadratureConfig& cfg) {
  if (weightPower < 0) throw std::invalid_argument("weightPower must be >= 0");
  if (!(hi > lo)) throw std::invalid_argument("integrate_radial: empty domain");
  auto weighted = [&](double r) {
    return weightPower == 0 ? f(r) : f(r) * std::pow(r, weightPower);
  };
  if (std::isinf(hi)) {
    if (!std::isfinite(lo)) throw std::invalid_argument("integrate_radial: lo must be finite");
    const double split = lo + std::max(1.0, std::abs(lo));
    const auto segs = make_segments({lo, split}, hi);
    return integrate_segments(weighted, segs, cfg);
  }
  return integrate(weighted, lo, hi, cfg);
}

}  // namespace tsl
