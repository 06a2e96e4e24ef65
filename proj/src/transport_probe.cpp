#include "tsl/transport_probe.hpp"

#include "tsl/binding_gap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tsl {

namespace {

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

GaussRule gauss_legendre(int order) {
  if (order < 1 || order > 32) throw std::invalid_argument("gauss_legendre: order must lie in [1, 32]");
  GaussRule g;
  const unsigned m = static_cast<unsigned>(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      const double pn = std::legendre(m, x);
      const double pm = order > 1 ? std::legendre(m - 1, x) : 1.0;
      dp = order * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    g.x.push_back(x);
    g.w.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return g;
}

struct Window {
  double c1, c2, r;
  bool finite;  // compact support (disk) rather than a tail window (square)
  double core;  // length below which cells stop shrinking
};

// Radius beyond which a unit-scale profile carries less than 1e-3 of its
// half-space mass, found by doubling.
double tail_radius(const Component& c, const Params& P) {
  Component unit = c;
  unit.scale = 1.0;
  unit.offset = 0.0;
  unit.amplitude = 1.0;
  unit.cutoff = std::numeric_limits<double>::infinity();
  const TestFunction f(P, {unit});
  QuadratureConfig cfg;
  cfg.relTol = 1e-9;
  const double total = f.norms(cfg, IntegrationMethod::radial).lpStarMass;
  const double s = c.profile.s();
  double L = 2.0 * std::max(1.0, std::abs(s));
  for (int k = 0; k < 16; ++k, L *= 2.0) {
    GridSpec g{std::max(0.0, s - L), s + L, -L, L, 96, 192, 4, {}, {}};
    if (discretize_test_function(f, g).premass >= (1.0 - 1e-3) * total) return L;
  }
  return L;
}

std::vector<Window> windows(const TestFunction& u) {
  std::vector<Window> out;
  for (const auto& c : u.components()) {
    // the singular set (if any) sits at this distance from the boundary
    double reach = 1.0;
    if (c.profile.family() == ProfileFamily::escobar) reach = -c.profile.s();
    if (c.profile.family() == ProfileFamily::hyperbolic) reach = c.profile.gap();
    Window w{c.center1(), c.offset, c.cutoff, std::isfinite(c.cutoff), 0.5 * c.scale * std::clamp(reach, 0.1, 1.0)};
    if (!w.finite) w.r = c.scale * tail_radius(c, u.params());
    out.push_back(w);
  }
  return out;
}

std::size_t count_cells(const std::vector<double>& e1, const std::vector<double>& e2, const std::vector<Window>& ws) {
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < e1.size(); ++i) {
    for (std::size_t j = 0; j + 1 < e2.size(); ++j) {
      for (const auto& w : ws) {
        const double d1 = std::max({e1[i] - w.c1, w.c1 - e1[i + 1], 0.0});
        const double d2 = std::max({e2[j] - w.c2, w.c2 - e2[j + 1], 0.0});
        const bool hit = w.finite ? d1 * d1 + d2 * d2 < w.r * w.r : d1 < w.r && d2 < w.r;
        if (hit) {
          ++count;
          break;
        }
      }
    }
  }
  return count;
}

// Cell density along one axis: 1 / sqrt(core^2 + d^2) inside each window,
// plus a small floor so gaps between windows still get cells.
struct AxisDensity {
  std::vector<double> x, cumulative;

  AxisDensity(double lo, double hi, const std::vector<std::array<double, 3>>& wins) {
    const int m = 20000;
    const double floor = 0.02 / (hi - lo);
    auto rho = [&](double t) {
      double v = floor;
      for (const auto& w : wins)
        if (std::abs(t - w[0]) < w[1]) v += 1.0 / std::hypot(w[2], t - w[0]);
      return v;
    };
    x.resize(m + 1);
    cumulative.assign(m + 1, 0.0);
    for (int i = 0; i <= m; ++i) x[i] = lo + (hi - lo) * i / m;
    for (int i = 1; i <= m; ++i) cumulative[i] = cumulative[i - 1] + 0.5 * (rho(x[i - 1]) + rho(x[i])) * (x[i] - x[i - 1]);
  }
  double total() const { return cumulative.back(); }
  std::vector<double> edges(int n) const {
    std::vector<double> e(n + 1);
    e.front() = x.front();
    e.back() = x.back();
    for (int k = 1; k < n; ++k) {
      const double target = total() * k / n;
      const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), target);
      const std::size_t i = static_cast<std::size_t>(it - cumulative.begin());
      const double f = (target - cumulative[i - 1]) / (cumulative[i] - cumulative[i - 1]);
      e[k] = x[i - 1] + f * (x[i] - x[i - 1]);
    }
    return e;
  }
};

std::vector<double> uniform_edges(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("GridSpec: need at least one cell per direction");
  std::vector<double> e(n + 1);
  for (int i = 0; i <= n; ++i) e[i] = lo + (hi - lo) * i / n;
  e.back() = hi;
  return e;
}

}  // namespace

std::vector<double> GridSpec::x1_edges() const { return edges1.empty() ? uniform_edges(x1lo, x1hi, n1) : edges1; }
std::vector<double> GridSpec::x2_edges() const { return edges2.empty() ? uniform_edges(x2lo, x2hi, n2) : edges2; }

DiscretizedDensity discretize_density(const std::function<double(double, double)>& density, const GridSpec& grid) {
  const std::vector<double> e1 = grid.x1_edges(), e2 = grid.x2_edges();
  if (e1.size() < 2 || e2.size() < 2) throw std::invalid_argument("discretize_density: empty grid");
  if (!(e1.front() >= 0.0)) throw std::invalid_argument("discretize_density: grid must lie in x1 >= 0");
  for (std::size_t i = 1; i < e1.size(); ++i)
    if (!(e1[i] > e1[i - 1])) throw std::invalid_argument("discretize_density: x1 edges must increase");
  for (std::size_t i = 1; i < e2.size(); ++i)
    if (!(e2[i] > e2[i - 1])) throw std::invalid_argument("discretize_density: x2 edges must increase");
  const GaussRule g = gauss_legendre(grid.order);
  DiscretizedDensity out;
  out.measure.dim = 2;
  out.order = grid.order;
  for (std::size_t i = 0; i + 1 < e1.size(); ++i) {
    const double h1 = e1[i + 1] - e1[i], m1 = 0.5 * (e1[i] + e1[i + 1]);
    for (std::size_t j = 0; j + 1 < e2.size(); ++j) {
      const double h2 = e2[j + 1] - e2[j], m2 = 0.5 * (e2[j] + e2[j + 1]);
      double mass = 0.0;
      for (std::size_t a = 0; a < g.x.size(); ++a)
        for (std::size_t b = 0; b < g.x.size(); ++b) {
          const double v = density(m1 + 0.5 * h1 * g.x[a], m2 + 0.5 * h2 * g.x[b]);
          if (!(v >= 0.0)) throw std::invalid_argument("discretize_density: density must be nonnegative");
          mass += g.w[a] * g.w[b] * v;
        }
      mass *= 0.25 * h1 * h2;
      if (mass > 0.0) {
        const double x[2] = {m1, m2};
        out.measure.add(x, mass);
        out.cells.push_back({e1[i], e1[i + 1], e2[j], e2[j + 1]});
        out.premass += mass;
      } else {
        ++out.dropped;
      }
    }
  }
  if (!(out.premass > 0.0)) throw std::invalid_argument("discretize_density: density has empty support on the grid");
  for (double& w : out.measure.weights) w /= out.premass;
  return out;
}

DiscretizedDensity discretize_test_function(const TestFunction& u, const GridSpec& grid) {
  if (u.params().n != 2) throw std::invalid_argument("discretize_test_function: planar grids need n = 2");
  const double pStar = u.params().pStar;
  return discretize_density(
      [&](double x1, double x2) { return std::pow(std::abs(u.value({x1, x2, 0.0})), pStar); }, grid);
}

GridSpec fit_grid(const TestFunction& u, std::size_t maxAtoms) {
  if (maxAtoms < 4) throw std::invalid_argument("fit_grid: need at least 4 atoms");
  const std::vector<Window> ws = windows(u);
  if (ws.empty()) throw std::invalid_argument("fit_grid: test function has no components");
  GridSpec g;
  g.x1lo = 0.0;
  g.x1hi = 0.0;
  g.x2lo = std::numeric_limits<double>::infinity();
  g.x2hi = -g.x2lo;
  std::vector<std::array<double, 3>> w1, w2;
  for (const auto& w : ws) {
    g.x1hi = std::max(g.x1hi, w.c1 + w.r);
    g.x2lo = std::min(g.x2lo, w.c2 - w.r);
    g.x2hi = std::max(g.x2hi, w.c2 + w.r);
    w1.push_back({w.c1, w.r, w.core});
    w2.push_back({w.c2, w.r, w.core});
  }
  if (!(g.x1hi > 0.0)) throw std::invalid_argument("fit_grid: support does not meet the half-space");
  const AxisDensity a1(g.x1lo, g.x1hi, w1), a2(g.x2lo, g.x2hi, w2);
  // largest cells-per-unit-density factor whose grid stays within the budget
  auto cells = [&](double k, std::vector<double>& e1, std::vector<double>& e2) {
    e1 = a1.edges(std::max(1, static_cast<int>(std::ceil(k * a1.total()))));
    e2 = a2.edges(std::max(1, static_cast<int>(std::ceil(k * a2.total()))));
    return count_cells(e1, e2, ws);
  };
  std::vector<double> e1, e2;
  double k = 1.0;
  while (cells(k, e1, e2) > maxAtoms) k *= 0.5;
  while (cells(2.0 * k, e1, e2) <= maxAtoms) k *= 2.0;
  double lo = k, hi = 2.0 * k;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cells(mid, e1, e2) <= maxAtoms ? lo : hi) = mid;
  }
  cells(lo, e1, e2);
  g.n1 = static_cast<int>(e1.size()) - 1;
  g.n2 = static_cast<int>(e2.size()) - 1;
  g.edges1 = std::move(e1);
  g.edges2 = std::move(e2);
  return g;
}

double deficit_cs_rhs(const TestFunction& u, double s, const DiscretizedDensity& source,
                      const std::vector<std::vector<double>>& mapped) {
  const DiscreteMeasure& mu = source.measure;
  if (mapped.size() != mu.size() || source.cells.size() != mu.size())
    throw std::invalid_argument("deficit_cs_rhs: one mapped point and one cell per atom required");
  const Params& P = u.params();
  const double power = P.pSharp - 1.0;
  const GaussRule g = gauss_legendre(source.order);
  double sum = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    if (mapped[k].empty() || !std::isfinite(mapped[k][0])) continue;
    const double S1 = mapped[k][0] - s, S2 = mapped[k][1];
    const double Sn = std::hypot(S1, S2);
    if (Sn == 0.0) continue;
    const auto x = mu.point(k);
    const Point3 centre{x[0], x[1], 0.0};
    const auto gc = u.gradient(centre);
    const double gcn = std::hypot(gc[0], gc[1]);
    if (gcn == 0.0) continue;
    const double d1 = -gc[0] / gcn - S1 / Sn, d2 = -gc[1] / gcn - S2 / Sn;
    const auto& c = source.cells[k];
    const double h1 = c[1] - c[0], h2 = c[3] - c[2];
    double cell = 0.0;
    for (std::size_t a = 0; a < g.x.size(); ++a)
      for (std::size_t b = 0; b < g.x.size(); ++b) {
        const Point3 pt{c[0] + 0.5 * h1 * (1.0 + g.x[a]), c[2] + 0.5 * h2 * (1.0 + g.x[b]), 0.0};
        const double val = u.value(pt);
        if (!(val > 0.0)) continue;
        const auto gr = u.gradient(pt);
        cell += g.w[a] * g.w[b] * std::pow(val, power) * std::hypot(gr[0], gr[1]);
      }
    sum += 0.25 * h1 * h2 * Sn * (d1 * d1 + d2 * d2) * cell;
  }
  return sum;
}

double deficit_cs_constant(const Params& params, double phi, double yT) {
  return 2.0 * yT / (params.p * std::pow(phi, params.p - 1.0));
}

TransportInstance build_transport_instance(const CurveContext& ctx, const TestFunction& uIn, std::size_t maxAtoms) {
  const Params& P = ctx.params();
  if (P.n != 2) throw std::invalid_argument("build_transport_instance: transport probes run in the plane (n = 2)");
  TransportInstance inst;
  TestNorms nm;
  inst.u = uIn.normalized(ctx.config(), &nm);
  inst.T = nm.T(P);
  const SolvedS sol = ctx.solve_s_for_T(inst.T);
  inst.s = sol.s;
  inst.target = extremal_test_function(normalize(sol.profile(), ctx.config()));
  const TestFunction& v = inst.target;
  inst.source = discretize_test_function(inst.u, fit_grid(inst.u, maxAtoms));
  inst.targetDensity = discretize_test_function(v, fit_grid(v, maxAtoms));
  inst.plan = solve_exact_plan(inst.source.measure, inst.targetDensity.measure);
  inst.mapped = barycentric_map(inst.plan, inst.source.measure, inst.targetDensity.measure);
  return inst;
}

DeficitCsCheck deficit_cs_check(const CurveContext& ctx, const TestFunction& u, std::size_t maxAtoms) {
  const TransportInstance inst = build_transport_instance(ctx, u, maxAtoms);
  DeficitCsCheck out;
  out.T = inst.T;
  out.atoms = inst.source.measure.size();
  out.rhs = deficit_cs_rhs(inst.u, inst.s, inst.source, inst.mapped);
  out.delta = deficit(ctx, inst.u).delta;
  const PhiPoint pt = ctx.phi_of_T(inst.T);
  out.constant = deficit_cs_constant(ctx.params(), pt.phi, pt.yT);
  out.bound = out.constant * out.delta;
  out.ratio = out.bound > 0.0 ? out.rhs / out.bound : std::numeric_limits<double>::quiet_NaN();
  return out;
}

ConeStats cone_exclusion_stats(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               const std::vector<std::vector<double>>& mapped, const ConeSpec& cone, double s,
                               double epsilon, const std::function<bool(double, double)>& goodSet) {
  if (!(cone.slope > 0.0)) throw std::invalid_argument("cone_exclusion_stats: slope must be positive");
  if (mapped.size() != mu.size()) throw std::invalid_argument("cone_exclusion_stats: one mapped point per atom required");
  if (mu.dim != 2 || nu.dim != 2) throw std::invalid_argument("cone_exclusion_stats: planar measures required");
  auto inCone = [&](double y1, double y2) { return std::abs(y2) < cone.slope * std::abs(y1); };
  ConeStats st;
  st.epsilon = epsilon;
  for (std::size_t j = 0; j < nu.size(); ++j) {
    const auto y = nu.point(j);
    if (inCone(y[0], y[1])) st.bBar += nu.weights[j];
    if (std::hypot(y[0] - s, y[1]) < epsilon) st.excisedTarget += nu.weights[j];
  }
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const auto x = mu.point(k);
    const double m = mu.weights[k];
    const double y1 = mapped[k][0], y2 = mapped[k][1];
    const bool excised = std::hypot(y1 - s, y2) < epsilon;
    if (excised) st.excisedSource += m;
    if (x[1] > 0.0) {
      st.upperMass += m;
      if (y2 < 0.0) {
        st.muE += m;
        if (!inCone(y1, y2)) st.muEstar += m;
      }
    } else if (x[1] < 0.0) {
      st.lowerMass += m;
      if (y2 >= 0.0) {
        st.muF += m;
        if (y2 > 0.0 && !inCone(y1, y2)) st.muFstar += m;
      }
    }
    if (goodSet && goodSet(x[0], x[1])) {
      st.goodMass += m;
      if (!excised && !(y2 < 0.0)) st.goodStarMass += m;
    }
  }
  return st;
}

SplitTransportReport split_transport_probe(const CurveContext& ctx, const SplitSpec& spec, double R, double sep,
                                           std::size_t maxAtoms, const ConeSpec& cone) {
  SplitTransportReport rep;
  rep.construction = build_split_function(ctx, spec, R, sep);
  rep.proofBound = proof_side_bound(ctx, spec);
  const TransportInstance inst = build_transport_instance(ctx, rep.construction.w, maxAtoms);
  rep.sourcePremass = inst.source.premass;
  rep.targetPremass = inst.targetDensity.premass;
  rep.targetLpStarMass = 1.0;
  rep.sourceAtoms = inst.source.measure.size();
  rep.targetAtoms = inst.targetDensity.measure.size();
  rep.marginalError = marginal_error(inst.plan, inst.source.measure, inst.targetDensity.measure);
  rep.monotonicity = check_cyclical_monotonicity(inst.plan, inst.source.measure, inst.targetDensity.measure);

  // good set of the smaller bump, which sits on the x2 > 0 side
  const double Tsmall = spec.m1 <= spec.m2 ? spec.T1 : spec.T2;
  const double offset = 0.5 * rep.construction.sep;
  const TranslatedProfile tp = ctx.solve_s_for_T(Tsmall).profile();
  const double N = normalize(tp, ctx.config()).lpStarNormalizer;
  const double c = rep.proofBound.cBar, sup = rep.proofBound.supNorm;
  const double s1 = tp.s(), half = 0.5 * R;
  auto good = [&](double x1, double x2) {
    const double z2 = x2 - offset;
    const double r = std::hypot(x1 - s1, z2);
    if (r == 0.0 || r >= half) return false;
    const ProfileValue pv = tp.at_point(x1, std::abs(z2));
    const double g = pv.gradMagnitude / N;
    return pv.value / N >= c * sup && g >= c && -g * z2 / r >= c;
  };
  rep.cone = cone_exclusion_stats(inst.source.measure, inst.targetDensity.measure, inst.mapped, cone, inst.s,
                                  rep.proofBound.epsilon, good);
  return rep;
}

}  // namespace tsl
