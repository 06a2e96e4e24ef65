#include "tsl/test_function.hpp"
#include "tsl/radial_reduction.hpp"
#include "tsl/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tsl {

std::pair<double, double> Component::radial(double r, double u) const {
  if (r >= cutoff) return {0.0, 0.0};
  const ProfileValue pv = profile.at(r / scale, u / scale);
  const double eta = std::isfinite(cutoff) ? cutoff_eta(r / cutoff) : 1.0;
  const double deta = std::isfinite(cutoff) ? cutoff_eta_derivative(r / cutoff) / cutoff : 0.0;
  const double value = amplitude * pv.value * eta;
  const double deriv = amplitude * (-pv.gradMagnitude / scale * eta + pv.value * deta);
  return {value, deriv};
}

double TestNorms::T(const Params& P) const {
  return std::pow(traceMass, 1.0 / P.pSharp) / std::pow(lpStarMass, 1.0 / P.pStar);
}

double TestNorms::phi(const Params& P) const {
  return std::pow(gradEnergy, 1.0 / P.p) / std::pow(lpStarMass, 1.0 / P.pStar);
}

namespace {

struct Local {
  double r;
  double u;
  double d1, d2, rho;
};

Local locate(const Component& c, const Point3& x) {
  const double c1 = c.center1();
  const double d1 = x.x1 - c1;
  const double d2 = x.x2 - c.offset;
  const double rr = d1 * d1 + d2 * d2 + x.rho * x.rho;
  const double r = std::sqrt(rr);
  double u = r;
  if (c1 < 0.0) u = (x.x1 * (x.x1 - 2.0 * c1) + d2 * d2 + x.rho * x.rho) / (r - c1);
  return {r, u, d1, d2, x.rho};
}

double sphere_weight(int k, double rho) {
  // |S^{k-1}| rho^{k-1}: measure of the sphere of radius rho in R^k
  return sphere_area(k) * (k == 1 ? 1.0 : std::pow(rho, k - 1));
}

}  // namespace

double TestFunction::value(const Point3& x) const {
  double v = 0.0;
  for (const auto& c : components_) {
    const Local l = locate(c, x);
    v += c.radial(l.r, l.u).first;
  }
  return v;
}

std::array<double, 3> TestFunction::gradient(const Point3& x) const {
  std::array<double, 3> g{0.0, 0.0, 0.0};
  for (const auto& c : components_) {
    const Local l = locate(c, x);
    if (l.r == 0.0) continue;
    const double d = c.radial(l.r, l.u).second / l.r;
    g[0] += d * l.d1;
    g[1] += d * l.d2;
    g[2] += d * l.rho;
  }
  return g;
}

TestFunction TestFunction::scaled(double f) const {
  TestFunction out = *this;
  for (auto& c : out.components_) c.amplitude *= f;
  return out;
}

TestFunction TestFunction::dilated(double alpha) const {
  if (!(alpha > 0.0)) throw std::invalid_argument("dilation factor must be positive");
  TestFunction out = *this;
  const double amp = std::pow(alpha, -params_.n / params_.pStar);
  for (auto& c : out.components_) {
    c.amplitude *= amp;
    c.scale *= alpha;
    c.offset *= alpha;
    c.cutoff *= alpha;
  }
  return out;
}

TestFunction TestFunction::translated(double h) const {
  TestFunction out = *this;
  for (auto& c : out.components_) c.offset += h;
  return out;
}

TestFunction TestFunction::minus(const TestFunction& other) const {
  TestFunction out = *this;
  for (auto c : other.components_) {
    c.amplitude = -c.amplitude;
    out.components_.push_back(c);
  }
  return out;
}

bool TestFunction::co_centered() const {
  for (const auto& c : components_) {
    if (c.center1() != components_.front().center1() || c.offset != components_.front().offset)
      return false;
  }
  return true;
}

bool TestFunction::disjoint_supports() const {
  for (std::size_t i = 0; i < components_.size(); ++i) {
    for (std::size_t j = i + 1; j < components_.size(); ++j) {
      const auto& a = components_[i];
      const auto& b = components_[j];
      const double d = std::hypot(a.center1() - b.center1(), a.offset - b.offset);
      if (!(d >= a.cutoff + b.cutoff)) return false;
    }
  }
  return true;
}

bool TestFunction::on_axis() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const Component& c) { return c.offset == 0.0; });
}

IntegrationMethod TestFunction::classify() const {
  if (co_centered()) return IntegrationMethod::radial;
  if (disjoint_supports()) return IntegrationMethod::disjoint;
  if (on_axis()) return IntegrationMethod::axisymmetric;
  return params_.n == 2 ? IntegrationMethod::planar : IntegrationMethod::biaxial;
}

namespace {

std::string method_name(IntegrationMethod m) {
  switch (m) {
    case IntegrationMethod::radial: return "radial";
    case IntegrationMethod::disjoint: return "disjoint";
    case IntegrationMethod::axisymmetric: return "axisymmetric";
    case IntegrationMethod::planar: return "planar";
    case IntegrationMethod::biaxial: return "biaxial";
    case IntegrationMethod::automatic: return "automatic";
  }
  return "unknown";
}

// Norms of co-centred components by radial reduction.
TestNorms radial_norms(const std::vector<Component>& comps, const Params& P,
                       const QuadratureConfig& cfg) {
  RadialLayout layout;
  layout.center = comps.front().center1();
  layout.scale = 0.0;
  layout.support = 0.0;
  double nearGap = std::numeric_limits<double>::infinity();
  for (const auto& c : comps) {
    layout.scale = std::max(layout.scale, c.scale);
    layout.support = std::max(layout.support, c.cutoff);
    layout.breaks.push_back(c.scale);
    if (std::isfinite(c.cutoff)) layout.breaks.push_back(0.5 * c.cutoff);
    if (c.profile.family() == ProfileFamily::hyperbolic)
      nearGap = std::min(nearGap, c.profile.gap() * c.scale);
  }
  if (std::isfinite(nearGap)) layout.nearGap = nearGap;
  auto sum = [&](double r, double u) {
    double v = 0.0, d = 0.0;
    for (const auto& c : comps) {
      const auto [cv, cd] = c.radial(r, u);
      v += cv;
      d += cd;
    }
    return std::pair<double, double>{v, d};
  };
  TestNorms out;
  out.method = "radial";
  auto track = [&](const QuadratureEstimate& e) {
    out.maxRelError = std::max(out.maxRelError, e.relative_error());
    return e.value;
  };
  const int n = P.n;
  out.lpStarMass = track(halfspace_radial_integral(
      [&](double r, double u) { return std::pow(std::abs(sum(r, u).first), P.pStar); }, n, layout, cfg));
  out.traceMass = track(boundary_radial_integral(
      [&](double r, double u) { return std::pow(std::abs(sum(r, u).first), P.pSharp); }, n, layout, cfg));
  out.gradEnergy = track(halfspace_radial_integral(
      [&](double r, double u) { return std::pow(std::abs(sum(r, u).second), P.p); }, n, layout, cfg));
  return out;
}

struct Breaks {
  std::vector<double> pts;
  bool infinite = false;
};

// Breakpoints along x1 >= 0 for the outer integral.
Breaks x1_breaks(const std::vector<Component>& comps) {
  Breaks b;
  b.pts.push_back(0.0);
  for (const auto& c : comps) {
    const double c1 = c.center1();
    for (double w : {0.0, c.scale, 0.5 * c.cutoff, c.cutoff}) {
      if (!std::isfinite(w)) continue;
      b.pts.push_back(c1 - w);
      b.pts.push_back(c1 + w);
    }
    if (c.profile.family() == ProfileFamily::hyperbolic) {
      for (double h = c.profile.gap() * c.scale; h < c.scale; h *= 4.0) b.pts.push_back(h);
    }
    if (!std::isfinite(c.cutoff)) b.infinite = true;
  }
  std::vector<double> kept;
  for (double x : b.pts)
    if (x >= 0.0) kept.push_back(x);
  b.pts = kept;
  return b;
}

// Breakpoints in a transverse distance t >= 0 from the line x2 = offset at
// fixed x1 (radius of the sphere sections through each component's rings).
void transverse_breaks(const Component& c, double dx1, std::vector<double>& pts) {
  for (double w : {c.scale, 0.5 * c.cutoff, c.cutoff}) {
    if (!std::isfinite(w)) continue;
    const double t2 = w * w - dx1 * dx1;
    if (t2 > 0.0) pts.push_back(std::sqrt(t2));
  }
  if (c.profile.family() == ProfileFamily::hyperbolic && dx1 * dx1 < 4.0 * c.scale * c.scale) {
    // near the boundary the profile varies on sqrt(2 gap) scale
    for (double h = c.scale * std::sqrt(2.0 * c.profile.gap()); h < c.scale; h *= 4.0) pts.push_back(h);
  }
}

QuadratureConfig inner_config(const QuadratureConfig& cfg) {
  QuadratureConfig inner = cfg;
  inner.relTol = std::max(cfg.relTol * 0.1, 1e-13);
  inner.absTol = cfg.absTol * 1e-3;
  return inner;
}

double end_of(const Breaks& b) {
  if (b.infinite) return std::numeric_limits<double>::infinity();
  return *std::max_element(b.pts.begin(), b.pts.end());
}

}  // namespace

TestNorms TestFunction::norms(const QuadratureConfig& cfg, IntegrationMethod method) const {
  if (components_.empty()) throw std::invalid_argument("test function has no components");
  // a common tangential offset is removed first: the norms are invariant
  const double common = components_.front().offset;
  if (common != 0.0 && std::all_of(components_.begin(), components_.end(),
                                   [&](const Component& c) { return c.offset == common; }))
    return translated(-common).norms(cfg, method);
  if (method == IntegrationMethod::automatic) method = classify();
  const Params& P = params_;
  const int n = P.n;
  if (method == IntegrationMethod::radial) {
    if (!co_centered()) throw std::invalid_argument("radial integration requires co-centred components");
    return radial_norms(components_, P, cfg);
  }
  if (method == IntegrationMethod::disjoint) {
    if (!disjoint_supports()) throw std::invalid_argument("components overlap");
    TestNorms out;
    out.method = "disjoint";
    for (const auto& c : components_) {
      const TestNorms part = radial_norms({c}, P, cfg);
      out.lpStarMass += part.lpStarMass;
      out.traceMass += part.traceMass;
      out.gradEnergy += part.gradEnergy;
      out.maxRelError = std::max(out.maxRelError, part.maxRelError);
    }
    return out;
  }

  const QuadratureConfig inner = inner_config(cfg);
  const Breaks xb = x1_breaks(components_);
  const auto xsegs = make_segments(xb.pts, end_of(xb));
  TestNorms out;
  out.method = method_name(method);
  auto track = [&](const QuadratureEstimate& e) {
    out.maxRelError = std::max(out.maxRelError, e.relative_error());
    return e.value;
  };

  // three integrands evaluated together would need vector quadrature; the
  // nested integrals are run once per functional instead
  enum class Kind { mass, grad };
  auto bulk_density = [&](const Point3& x, Kind k) {
    if (k == Kind::mass) return std::pow(std::abs(value(x)), P.pStar);
    const auto g = gradient(x);
    return std::pow(std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]), P.p);
  };

  if (method == IntegrationMethod::axisymmetric) {
    if (!on_axis()) throw std::invalid_argument("axisymmetric integration requires on-axis centres");
    auto ring = [&](double x1, Kind k) {
      std::vector<double> pts{0.0};
      bool infinite = false;
      for (const auto& c : components_) {
        transverse_breaks(c, x1 - c.center1(), pts);
        if (!std::isfinite(c.cutoff)) infinite = true;
      }
      const double end = infinite ? std::numeric_limits<double>::infinity()
                                  : *std::max_element(pts.begin(), pts.end());
      const auto segs = make_segments(pts, end);
      return integrate_segments(
                 [&](double rho) { return bulk_density({x1, rho, 0.0}, k) * sphere_weight(n - 1, rho); },
                 segs, inner)
          .value;
    };
    out.lpStarMass = track(integrate_segments([&](double x1) { return ring(x1, Kind::mass); }, xsegs, cfg));
    out.gradEnergy = track(integrate_segments([&](double x1) { return ring(x1, Kind::grad); }, xsegs, cfg));
    std::vector<double> pts{0.0};
    bool infinite = false;
    for (const auto& c : components_) {
      transverse_breaks(c, -c.center1(), pts);
      if (!std::isfinite(c.cutoff)) infinite = true;
    }
    const double end = infinite ? std::numeric_limits<double>::infinity() : *std::max_element(pts.begin(), pts.end());
    out.traceMass = track(integrate_segments(
        [&](double rho) { return std::pow(std::abs(value({0.0, rho, 0.0})), P.pSharp) * sphere_weight(n - 1, rho); },
        make_segments(pts, end), cfg));
    return out;
  }

  // Integral over the whole line in x2 of g(x2), split at 0 into two half lines
  // with breakpoints from every component at transverse distance dx1.
  auto line_integral = [&](const std::function<double(double)>& g, double x1,
                           const QuadratureConfig& qc) {
    double total = 0.0;
    for (double sign : {1.0, -1.0}) {
      std::vector<double> pts{0.0};
      bool infinite = false;
      for (const auto& c : components_) {
        std::vector<double> local{0.0};
        transverse_breaks(c, x1 - c.center1(), local);
        for (double t : local) {
          for (double x2 : {c.offset + t, c.offset - t}) {
            if (sign * x2 > 0.0) pts.push_back(sign * x2);
          }
        }
        if (!std::isfinite(c.cutoff)) infinite = true;
      }
      const double end = infinite ? std::numeric_limits<double>::infinity() : *std::max_element(pts.begin(), pts.end());
      if (!(end > 0.0)) continue;
      total += track(integrate_segments([&](double t) { return g(sign * t); }, make_segments(pts, end), qc));
    }
    return total;
  };

  if (method == IntegrationMethod::planar) {
    if (n != 2) throw std::invalid_argument("planar integration requires n = 2");
    auto slice = [&](double x1, Kind k) {
      return line_integral([&](double x2) { return bulk_density({x1, x2, 0.0}, k); }, x1, inner);
    };
    out.lpStarMass = track(integrate_segments([&](double x1) { return slice(x1, Kind::mass); }, xsegs, cfg));
    out.gradEnergy = track(integrate_segments([&](double x1) { return slice(x1, Kind::grad); }, xsegs, cfg));
    out.traceMass = line_integral(
        [&](double x2) { return std::pow(std::abs(value({0.0, x2, 0.0})), P.pSharp); }, 0.0, cfg);
    return out;
  }

  // biaxial: (x1, x2, rho) with rho the radius in the remaining n - 2 coordinates
  QuadratureConfig innermost = inner_config(inner);
  auto radial_perp = [&](double x1, double x2, const std::function<double(const Point3&)>& f,
                         const QuadratureConfig& qc) {
    std::vector<double> pts{0.0};
    bool infinite = false;
    for (const auto& c : components_) {
      const double d1 = x1 - c.center1();
      const double d2 = x2 - c.offset;
      transverse_breaks(c, std::hypot(d1, d2), pts);
      if (!std::isfinite(c.cutoff)) infinite = true;
    }
    const double end = infinite ? std::numeric_limits<double>::infinity() : *std::max_element(pts.begin(), pts.end());
    if (!(end > 0.0)) return 0.0;
    return integrate_segments([&](double rho) { return f({x1, x2, rho}) * sphere_weight(n - 2, rho); },
                              make_segments(pts, end), qc)
        .value;
  };
  auto slab = [&](double x1, Kind k) {
    return line_integral(
        [&](double x2) { return radial_perp(x1, x2, [&](const Point3& x) { return bulk_density(x, k); }, innermost); },
        x1, inner);
  };
  out.lpStarMass = track(integrate_segments([&](double x1) { return slab(x1, Kind::mass); }, xsegs, cfg));
  out.gradEnergy = track(integrate_segments([&](double x1) { return slab(x1, Kind::grad); }, xsegs, cfg));
  out.traceMass = line_integral(
      [&](double x2) {
        return radial_perp(0.0, x2, [&](const Point3& x) { return std::pow(std::abs(value(x)), P.pSharp); }, inner);
      },
      0.0, cfg);
  return out;
}

TestFunction TestFunction::normalized(const QuadratureConfig& cfg, TestNorms* normsOut) const {
  const TestNorms nm = norms(cfg);
  if (!(nm.lpStarMass > 0.0)) throw std::invalid_argument("test function has zero mass");
  const double f = std::pow(nm.lpStarMass, -1.0 / params_.pStar);
  if (normsOut) {
    *normsOut = nm;
    normsOut->lpStarMass *= std::pow(f, params_.pStar);
    normsOut->traceMass *= std::pow(f, params_.pSharp);
    normsOut->gradEnergy *= std::pow(f, params_.p);
  }
  return scaled(f);
}

TestFunction::AnnulusMasses TestFunction::annulus_masses(double center2, double inner, double outer,
                                                         const QuadratureConfig& cfg) const {
  if (!(outer > inner) || inner < 0.0) throw std::invalid_argument("annulus radii must satisfy 0 <= inner < outer");
  std::vector<Component> near;
  for (const auto& c : components_) {
    const double d = std::hypot(c.center1(), c.offset - center2);
    if (d < outer + c.cutoff) near.push_back(c);
  }
  AnnulusMasses out;
  if (near.empty()) return out;
  const bool axial = std::all_of(near.begin(), near.end(), [&](const Component& c) { return c.offset == center2; });
  if (!axial && params_.n != 2)
    throw std::invalid_argument("annulus_masses: for n >= 3 the components meeting the ball must be centred on its axis");
  const TestFunction local(params_, near);
  const int n = params_.n;
  const QuadratureConfig in = inner_config(cfg);
  if (!axial) {
    // n = 2 without symmetry: polar coordinates over the half-disc annulus
    std::vector<double> tpts{inner, outer};
    std::vector<double> phis{-0.5 * std::numbers::pi, 0.5 * std::numbers::pi};
    for (const auto& c : near) {
      const double d = std::hypot(c.center1(), c.offset - center2);
      for (double w : {0.0, c.scale, 0.5 * c.cutoff, c.cutoff}) {
        if (!std::isfinite(w)) continue;
        for (double t : {d - w, d + w})
          if (t > inner && t < outer) tpts.push_back(t);
      }
      const double ang = std::atan2(c.offset - center2, std::max(c.center1(), 0.0));
      phis.push_back(ang);
    }
    std::sort(phis.begin(), phis.end());
    const auto tsegs = make_segments(tpts, outer);
    const auto psegs = make_segments(phis, 0.5 * std::numbers::pi);
    out.bulk = integrate_segments(
                   [&](double t) {
                     return t * integrate_segments(
                                    [&](double phi) {
                                      const double v = local.value({t * std::cos(phi), center2 + t * std::sin(phi), 0.0});
                                      return std::pow(std::abs(v), params_.pStar);
                                    },
                                    psegs, in)
                                    .value;
                   },
                   tsegs, cfg)
                   .value;
    std::vector<double> bpts{-outer, -inner, inner, outer};
    for (const auto& c : near) {
      for (double w : {0.0, c.scale, 0.5 * c.cutoff, c.cutoff}) {
        if (!std::isfinite(w) || w * w < c.center1() * c.center1()) continue;
        const double h = std::sqrt(w * w - c.center1() * c.center1());
        for (double y : {c.offset - center2 - h, c.offset - center2 + h})
          if (std::abs(y) > inner && std::abs(y) < outer) bpts.push_back(y);
      }
    }
    std::sort(bpts.begin(), bpts.end());
    double tr = 0.0;
    for (std::size_t k = 0; k + 1 < bpts.size(); ++k) {
      const double a = bpts[k], b = bpts[k + 1];
      if (std::abs(0.5 * (a + b)) < inner) continue;
      tr += integrate([&](double y) { return std::pow(std::abs(local.value({0.0, center2 + y, 0.0})), params_.pSharp); },
                      a, b, cfg)
                .value;
    }
    out.trace = tr;
    return out;
  }
  // polar coordinates about (0, center2, 0): x1 = t cos(phi), transverse t sin(phi)
  std::vector<double> tpts{inner, outer};
  for (const auto& c : near) {
    for (double w : {c.scale, 0.5 * c.cutoff, c.cutoff}) {
      const double t = std::abs(c.center1()) + w;
      if (t > inner && t < outer) tpts.push_back(t);
    }
  }
  const auto tsegs = make_segments(tpts, outer);
  auto shell = [&](double t) {
    return integrate(
               [&](double phi) {
                 const double x1 = t * std::cos(phi);
                 const double tr = t * std::sin(phi);
                 const double v = std::abs(local.value({x1, center2 + tr, 0.0}));
                 const double ang = n == 2 ? 2.0 : sphere_area(n - 1) * std::pow(std::sin(phi), n - 2);
                 return std::pow(v, params_.pStar) * ang;
               },
               0.0, 0.5 * std::numbers::pi, in)
               .value *
           std::pow(t, n - 1);
  };
  out.bulk = integrate_segments(shell, tsegs, cfg).value;
  // boundary annulus: |y| in [inner, outer] within the hyperplane
  out.trace = integrate_segments(
                  [&](double t) {
                    return std::pow(std::abs(local.value({0.0, center2 + t, 0.0})), params_.pSharp) *
                           sphere_weight(n - 1, t);
                  },
                  tsegs, cfg)
                  .value;
  return out;
}

TestFunction extremal_test_function(const NormalizedExtremal& ne) {
  Component c{ne.base};
  c.amplitude = 1.0 / ne.lpStarNormalizer;
  return TestFunction(ne.base.params(), {c});
}

}  // namespace tsl
