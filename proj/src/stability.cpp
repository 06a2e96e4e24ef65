#include "tsl/stability.hpp"
#include "tsl/root_find.hpp"
#include "tsl/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tsl {

DeficitReport deficit(const CurveContext& ctx, const TestFunction& u) {
  const Params& P = ctx.params();
  TestNorms nm;
  u.normalized(ctx.config(), &nm);
  DeficitReport r;
  r.T = nm.T(P);
  r.gradEnergy = nm.gradEnergy;
  r.phiT = ctx.phi_value(r.T);
  r.delta = r.gradEnergy - std::pow(r.phiT, P.p);
  r.relError = nm.maxRelError;
  return r;
}

namespace {

bool all_on_axis(const TestFunction& u) {
  return std::all_of(u.components().begin(), u.components().end(),
                     [](const Component& c) { return c.offset == 0.0; });
}

}  // namespace

DistanceResult distance_to_extremals(const CurveContext& ctx, const TestFunction& uIn, double T,
                                     const DistanceOptions& opts) {
  const Params& P = ctx.params();
  const QuadratureConfig& cfg = ctx.config();
  const TestFunction u = uIn.normalized(cfg);
  const TestFunction U = extremal_test_function(normalize(ctx.solve_s_for_T(T).profile(), cfg));

  auto objective = [&](int sign, double alpha, double x0) {
    // squared distance: smooth at the minimizer, unlike the norm itself
    const TestFunction v = U.dilated(alpha).translated(x0).scaled(sign);
    const double g = u.minus(v).norms(cfg).gradEnergy;
    return std::pow(g, 2.0 / P.p);
  };

  DistanceResult out;
  out.offsetPinned = all_on_axis(u);
  out.sign = objective(1, 1.0, 0.0) <= objective(-1, 1.0, 0.0) ? 1 : -1;

  // coarse log-grid scan in alpha, refined by Brent between the neighbours
  auto refine_alpha = [&](double x0, double& alpha, double& best) {
    int bestK = 0;
    best = std::numeric_limits<double>::infinity();
    for (int k = -8; k <= 8; ++k) {
      const double a = alpha * std::pow(2.0, k / 4.0);
      const double f = objective(out.sign, a, x0);
      if (f < best) {
        best = f;
        bestK = k;
      }
    }
    const double lo = alpha * std::pow(2.0, (bestK - 1) / 4.0);
    const double hi = alpha * std::pow(2.0, (bestK + 1) / 4.0);
    const ScalarMinimum m = minimize_scalar([&](double a) { return objective(out.sign, a, x0); }, {lo, hi},
                                            opts.tol * alpha);
    const bool interior = std::abs(bestK) < 8;
    if (m.min <= best) {
      best = m.min;
      alpha = m.argmin;
    } else {
      alpha = alpha * std::pow(2.0, bestK / 4.0);
    }
    return interior;
  };

  double alpha = 1.0, x0 = 0.0, best = 0.0;
  out.converged = refine_alpha(x0, alpha, best);
  if (!out.offsetPinned) {
    // anchor candidates: 0 and every component offset
    double bestX = 0.0;
    double bestF = best;
    for (const auto& c : u.components()) {
      const double f = objective(out.sign, alpha, c.offset);
      if (f < bestF) {
        bestF = f;
        bestX = c.offset;
      }
    }
    x0 = bestX;
    best = bestF;
    for (int round = 0; round < 6; ++round) {
      const double prevA = alpha, prevX = x0;
      const double half = 2.0 * alpha;
      const ScalarMinimum m = minimize_scalar([&](double h) { return objective(out.sign, alpha, h); },
                                              {x0 - half, x0 + half}, opts.tol * alpha);
      if (m.min < best) {
        best = m.min;
        x0 = m.argmin;
      }
      const ScalarMinimum ma = minimize_scalar([&](double a) { return objective(out.sign, a, x0); },
                                               {alpha / 1.5, alpha * 1.5}, opts.tol * alpha);
      if (ma.min < best) {
        best = ma.min;
        alpha = ma.argmin;
      }
      if (std::abs(alpha - prevA) < 1e-7 * alpha && std::abs(x0 - prevX) < 1e-7 * alpha) break;
    }
  } else if (opts.probeOffset) {
    const double h = 1e-2 * alpha;
    const double probe = std::min(objective(out.sign, alpha, h), objective(out.sign, alpha, -h));
    out.offsetProbe = std::sqrt(probe) - std::sqrt(best);
  }
  out.alpha = alpha;
  out.offset = x0;
  out.distance = std::sqrt(std::max(best, 0.0));
  return out;
}

std::string mode_name(PerturbationMode mode) {
  switch (mode) {
    case PerturbationMode::dilationBlend: return "dilationBlend";
    case PerturbationMode::profileBlend: return "profileBlend";
    case PerturbationMode::boundaryBump: return "boundaryBump";
  }
  return "unknown";
}

PerturbationMode parse_mode(const std::string& name) {
  if (name == "dilationBlend") return PerturbationMode::dilationBlend;
  if (name == "profileBlend") return PerturbationMode::profileBlend;
  if (name == "boundaryBump") return PerturbationMode::boundaryBump;
  throw std::invalid_argument("unknown perturbation mode: " + name);
}

TestFunction perturbation_family(const CurveContext& ctx, const PerturbationSpec& spec) {
  if (!(spec.epsilon >= 0.0 && spec.epsilon <= 0.5))
    throw std::invalid_argument("perturbation_family: epsilon must lie in [0, 0.5]");
  if (!(spec.baseT > 0.0)) throw std::invalid_argument("perturbation_family: baseT must be positive");
  const Params& P = ctx.params();
  const QuadratureConfig& cfg = ctx.config();
  const NormalizedExtremal ne = normalize(ctx.solve_s_for_T(spec.baseT).profile(), cfg);
  const TestFunction U = extremal_test_function(ne);
  if (spec.epsilon == 0.0) return U;
  const double e = spec.epsilon;
  std::vector<Component> comps;
  switch (spec.mode) {
    case PerturbationMode::dilationBlend: {
      comps = U.scaled(1.0 - e).components();
      const auto d = U.dilated(2.0).scaled(e).components();
      comps.insert(comps.end(), d.begin(), d.end());
      break;
    }
    case PerturbationMode::profileBlend: {
      comps = U.scaled(1.0 - e).components();
      const TestFunction V = extremal_test_function(normalize(ctx.solve_s_for_T(1.25 * spec.baseT).profile(), cfg));
      const auto d = V.scaled(e).components();
      comps.insert(comps.end(), d.begin(), d.end());
      break;
    }
    case PerturbationMode::boundaryBump: {
      comps = U.components();
      Component b{TranslatedProfile(ProfileFamily::sobolev, 0.5, P)};
      b.scale = 0.5;
      b.cutoff = 1.0;
      b.amplitude = e / ne.lpStarNormalizer;
      comps.push_back(b);
      break;
    }
  }
  return TestFunction(P, comps).normalized(cfg);
}

namespace {

StabilityRow stability_row(const CurveContext& ctx, double baseT, double eps, PerturbationMode mode) {
  StabilityRow row;
  row.epsilon = eps;
  const TestFunction u = perturbation_family(ctx, {baseT, mode, eps});
  if (eps == 0.0) {
    row.T = baseT;
    row.ratio = std::numeric_limits<double>::quiet_NaN();
    row.gradEnergy = std::pow(ctx.phi_value(baseT), ctx.params().p);
    return row;
  }
  const DeficitReport d = deficit(ctx, u);
  row.T = d.T;
  row.delta = d.delta;
  row.gradEnergy = d.gradEnergy;
  const DistanceResult dist = distance_to_extremals(ctx, u, d.T);
  row.distance = dist.distance;
  row.converged = dist.converged;
  row.ratioDefined = row.distance > 0.0;
  row.ratio = row.ratioDefined ? row.delta / (row.distance * row.distance)
                               : std::numeric_limits<double>::quiet_NaN();
  return row;
}

}  // namespace

std::vector<StabilityRow> stability_ratio_scan(const CurveContext& ctx, double baseT,
                                               const std::vector<double>& epsGrid, PerturbationMode mode) {
  std::vector<StabilityRow> rows(epsGrid.size());
  std::vector<std::string> errors(epsGrid.size());
  const long count = static_cast<long>(epsGrid.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long k = 0; k < count; ++k) {
    try {
      rows[k] = stability_row(ctx, baseT, epsGrid[k], mode);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  return rows;
}

std::vector<StabilityRow> stability_ratio_scan_serial(const CurveContext& ctx, double baseT,
                                                      const std::vector<double>& epsGrid,
                                                      PerturbationMode mode) {
  std::vector<StabilityRow> rows;
  for (double e : epsGrid) rows.push_back(stability_row(ctx, baseT, e, mode));
  return rows;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("log_log_slope: size mismatch");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int k = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++k;
  }
  if (k < 2) throw std::invalid_argument("log_log_slope: need two positive pairs");
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

double annulus_cutoff_gradient_norm(int n, const QuadratureConfig& cfg) {
  // half of the full-space integral: the cutoff is centred on the boundary
  auto ramp = [&](double t) { return std::pow(smoothstep_derivative(t), n); };
  const double inner = integrate([&](double r) { return ramp(r - 1.0) * std::pow(r, n - 1); }, 1.0, 2.0, cfg).value;
  const double outer = integrate([&](double r) { return ramp(r - 7.0) * std::pow(r, n - 1); }, 7.0, 8.0, cfg).value;
  return std::pow(0.5 * sphere_area(n) * (inner + outer), 1.0 / n);
}

AnnulusCheck annulus_trace_check(const TestFunction& uIn, double R, double epsilonMass, double center2,
                                 const QuadratureConfig& cfg) {
  if (!(R > 0.0) || !(epsilonMass > 0.0))
    throw std::invalid_argument("annulus_trace_check: R and epsilonMass must be positive");
  const Params& P = uIn.params();
  TestNorms nm;
  const TestFunction u = uIn.normalized(cfg, &nm);
  AnnulusCheck out;
  out.bulkMass = u.annulus_masses(center2, R, 8.0 * R, cfg).bulk;
  out.applicable = out.bulkMass <= epsilonMass;
  out.lhs = u.annulus_masses(center2, 2.0 * R, 7.0 * R, cfg).trace;
  const double grad = std::pow(nm.gradEnergy, 1.0 / P.p);
  const double psi = annulus_cutoff_gradient_norm(P.n, cfg);
  out.rhs = P.pSharp * (grad + psi * std::pow(epsilonMass, 1.0 / P.pStar)) *
            std::pow(epsilonMass, (P.pSharp - 1.0) / P.pStar);
  out.pass = out.applicable && out.lhs <= out.rhs;
  return out;
}

std::vector<AnnulusFixture> annulus_fixture_suite(const CurveContext& ctx, const CurveContext& planar) {
  if (planar.params().n != 2) throw std::invalid_argument("annulus_fixture_suite: the split case needs n = 2");
  const QuadratureConfig& cfg = ctx.config();
  std::vector<AnnulusFixture> out;

  const TestFunction ext = extremal_test_function(normalize(ctx.solve_s_for_T(ctx.constants().T0).profile(), cfg));
  AnnulusFixture a{"extremal", 1.0, 1e-3, 0.0, {}};
  for (int k = 0; k < 30; ++k, a.R *= 2.0) {
    a.check = annulus_trace_check(ext, a.R, a.epsilonMass, 0.0, cfg);
    if (a.check.applicable) break;
  }
  out.push_back(a);

  Component bubble{TranslatedProfile(ProfileFamily::sobolev, 0.5, ctx.params())};
  bubble.cutoff = 0.75;
  AnnulusFixture b{"inside-ball", 2.0, 1e-3, 0.0, {}};
  b.check = annulus_trace_check(TestFunction(ctx.params(), {bubble}), b.R, b.epsilonMass, 0.0, cfg);
  out.push_back(b);

  const SplitConstruction sc = build_split_function(planar, symmetric_split(planar.constants().T0, planar.params()), 4.0, 12.0);
  AnnulusFixture c{"split-between-bumps", 0.5, 1.0, 0.0, {}};
  const double bulk = annulus_trace_check(sc.w, c.R, c.epsilonMass, 0.0, planar.config()).bulkMass;
  c.epsilonMass = bulk;
  c.check = annulus_trace_check(sc.w, c.R, c.epsilonMass, 0.0, planar.config());
  out.push_back(c);
  return out;
}

bool GluingReport::all_hold() const {
  return std::all_of(rows.begin(), rows.end(), [](const GluingRow& r) { return r.holds; });
}

GluingReport glue_stability(const std::vector<StabilityRow>& rows, double alphaT, double delta0) {
  if (!(alphaT > 0.0) || !(delta0 > 0.0 && delta0 < 1.0))
    throw std::invalid_argument("glue_stability: need alphaT > 0 and delta0 in (0, 1)");
  GluingReport rep;
  rep.alphaT = alphaT;
  rep.delta0 = delta0;
  rep.alphaPrime = std::min(0.5 * alphaT, 0.25 * delta0);
  for (const auto& r : rows) {
    if (r.epsilon == 0.0) continue;
    GluingRow g;
    g.delta = r.delta;
    g.distanceSq = r.distance * r.distance;
    g.largeBranch = r.delta >= delta0 * r.gradEnergy;
    g.branchConstant = g.largeBranch ? 0.25 * delta0 : 0.5 * alphaT;
    g.holds = g.delta >= g.branchConstant * g.distanceSq && g.delta >= rep.alphaPrime * g.distanceSq;
    if (g.largeBranch) g.holds = g.holds && g.distanceSq <= 4.0 * r.gradEnergy;
    rep.rows.push_back(g);
  }
  return rep;
}

}  // namespace tsl
