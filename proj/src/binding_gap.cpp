#include "tsl/binding_gap.hpp"
#include "tsl/root_find.hpp"
#include "tsl/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace tsl {

SplitSpec SplitSpec::swapped() const {
  SplitSpec out = *this;
  std::swap(out.m1, out.m2);
  std::swap(out.t1, out.t2);
  std::swap(out.T1, out.T2);
  return out;
}

SplitSpec split_complement(double T, double m1, double t1, const Params& P) {
  if (!(T > 0.0)) throw std::invalid_argument("split_complement: T must be positive");
  if (!(m1 > 0.0 && m1 < 1.0)) throw std::invalid_argument("split_complement: m1 must lie in (0, 1)");
  if (!(t1 >= 0.0 && t1 <= T)) throw std::invalid_argument("split_complement: t1 must lie in [0, T]");
  SplitSpec s;
  s.T = T;
  s.m1 = m1;
  s.t1 = t1;
  s.m2 = std::pow(1.0 - std::pow(m1, P.pStar), 1.0 / P.pStar);
  s.t2 = std::pow(std::max(0.0, std::pow(T, P.pSharp) - std::pow(t1, P.pSharp)), 1.0 / P.pSharp);
  s.T1 = t1 / m1;
  s.T2 = s.t2 / s.m2;
  return s;
}

namespace {

struct PhiEval {
  double phi = 0.0;
  double relErr = 0.0;
};

// Relative error of a curve value: quadrature error of the norms plus its
// propagation through the solve for s_T (|T Phi'/Phi| <= p# + 1 on the curve).
PhiEval phi_with_error(const CurveContext& ctx, double T) {
  const double base = ctx.config().relTol;
  if (T == 0.0) return {ctx.constants().S, 2.0 * base};
  const PhiPoint pt = ctx.phi_of_T(T);
  const double rel = std::max(pt.relError, base);
  return {pt.phi, 2.0 * rel * (2.0 + ctx.params().pSharp)};
}

GapResult assemble(const Params& P, const SplitSpec& spec, const PhiEval& whole, const PhiEval& a,
                   const PhiEval& b) {
  GapResult g;
  g.spec = spec;
  g.lhs = std::pow(whole.phi, P.p);
  const double r1 = std::pow(spec.m1 * a.phi, P.p);
  const double r2 = std::pow(spec.m2 * b.phi, P.p);
  g.rhs = r1 + r2;
  g.gap = g.rhs - g.lhs;
  g.errBound = P.p * (g.lhs * whole.relErr + r1 * a.relErr + r2 * b.relErr) + 4e-16 * (g.rhs + g.lhs);
  return g;
}

std::vector<std::pair<double, double>> grid_nodes(int gridRes, double margin) {
  if (gridRes < 4) throw std::invalid_argument("scan_binding_grid: gridRes must be >= 4");
  if (!(margin > 0.0 && margin < 0.5)) throw std::invalid_argument("scan_binding_grid: margin must lie in (0, 0.5)");
  std::vector<std::pair<double, double>> nodes;
  for (int i = 0; i < gridRes; ++i) {
    const double m1 = margin + (1.0 - 2.0 * margin) * i / (gridRes - 1);
    for (int j = 0; j < gridRes; ++j) {
      const double u = margin + (1.0 - 2.0 * margin) * j / (gridRes - 1);
      nodes.emplace_back(m1, u);
    }
  }
  return nodes;
}

void reduce(BindingScan& scan) {
  scan.minGap = std::numeric_limits<double>::infinity();
  for (const auto& g : scan.table) {
    if (g.gap < scan.minGap) {
      scan.minGap = g.gap;
      scan.argmin = g.spec;
    }
    if (!g.certified()) scan.uncertified.push_back(g);
  }
}

}  // namespace

GapResult binding_gap(const CurveContext& ctx, const SplitSpec& spec) {
  return assemble(ctx.params(), spec, phi_with_error(ctx, spec.T), phi_with_error(ctx, spec.T1),
                  phi_with_error(ctx, spec.T2));
}

GapResult binding_gap(const SplitSpec& spec, const Params& params, const QuadratureConfig& cfg) {
  return binding_gap(CurveContext(params, cfg), spec);
}

BindingScan scan_binding_grid(const CurveContext& ctx, double T, int gridRes, double margin) {
  const auto nodes = grid_nodes(gridRes, margin);
  const PhiEval whole = phi_with_error(ctx, T);
  BindingScan scan;
  scan.T = T;
  scan.gridRes = gridRes;
  scan.margin = margin;
  scan.table.resize(nodes.size());
  std::vector<std::string> errors(nodes.size());
  const long count = static_cast<long>(nodes.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long k = 0; k < count; ++k) {
    try {
      const SplitSpec spec = split_complement(T, nodes[k].first, nodes[k].second * T, ctx.params());
      scan.table[k] = assemble(ctx.params(), spec, whole, phi_with_error(ctx, spec.T1),
                               phi_with_error(ctx, spec.T2));
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  reduce(scan);
  return scan;
}

BindingScan scan_binding_grid_serial(const CurveContext& ctx, double T, int gridRes, double margin) {
  const auto nodes = grid_nodes(gridRes, margin);
  const PhiEval whole = phi_with_error(ctx, T);
  BindingScan scan;
  scan.T = T;
  scan.gridRes = gridRes;
  scan.margin = margin;
  for (const auto& [m1, u] : nodes) {
    const SplitSpec spec = split_complement(T, m1, u * T, ctx.params());
    scan.table.push_back(assemble(ctx.params(), spec, whole, phi_with_error(ctx, spec.T1),
                                  phi_with_error(ctx, spec.T2)));
  }
  reduce(scan);
  return scan;
}

std::vector<GapResult> corner_path(const CurveContext& ctx, double T, const std::vector<double>& m2Values) {
  const Params& P = ctx.params();
  const PhiEval whole = phi_with_error(ctx, T);
  std::vector<GapResult> out;
  for (double m2 : m2Values) {
    if (!(m2 > 0.0 && m2 < 1.0)) throw std::invalid_argument("corner_path: m2 must lie in (0, 1)");
    const double t2 = m2 * T;
    const double m1 = std::pow(1.0 - std::pow(m2, P.pStar), 1.0 / P.pStar);
    const double t1 = std::pow(std::pow(T, P.pSharp) - std::pow(t2, P.pSharp), 1.0 / P.pSharp);
    SplitSpec spec = split_complement(T, m1, t1, P);
    // keep the intended second part exactly
    spec.m2 = m2;
    spec.t2 = t2;
    spec.T2 = T;
    out.push_back(assemble(P, spec, whole, phi_with_error(ctx, spec.T1), whole));
  }
  return out;
}

std::vector<PartitionCheck> check_random_partitions(const CurveContext& ctx, double T, int parts,
                                                    int count, std::uint64_t seed) {
  if (parts < 2) throw std::invalid_argument("check_random_partitions: need at least 2 parts");
  const Params& P = ctx.params();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  const PhiEval whole = phi_with_error(ctx, T);
  std::vector<PartitionCheck> out;
  for (int k = 0; k < count; ++k) {
    std::vector<double> wm(parts), wt(parts);
    for (int i = 0; i < parts; ++i) wm[i] = unif(rng);
    for (int i = 0; i < parts; ++i) wt[i] = unif(rng);
    double sm = 0.0, st = 0.0;
    for (int i = 0; i < parts; ++i) {
      sm += wm[i];
      st += wt[i];
    }
    PartitionCheck pc;
    pc.lhs = std::pow(whole.phi, P.p);
    pc.errBound = P.p * pc.lhs * whole.relErr;
    for (int i = 0; i < parts; ++i) {
      const double m = std::pow(wm[i] / sm, 1.0 / P.pStar);
      const double t = T * std::pow(wt[i] / st, 1.0 / P.pSharp);
      const PhiEval e = phi_with_error(ctx, t / m);
      const double term = std::pow(m * e.phi, P.p);
      pc.m.push_back(m);
      pc.t.push_back(t);
      pc.rhs += term;
      pc.errBound += P.p * term * e.relErr;
    }
    out.push_back(pc);
  }
  return out;
}

namespace {

// Fraction of S^{n-1} with w1 > a and -w2 >= gamma.
double angular_fraction(int n, double a, double gamma, const QuadratureConfig& cfg) {
  if (gamma > 1.0 || a >= 1.0) return 0.0;
  a = std::max(a, -1.0);
  gamma = std::max(gamma, 0.0);
  if (n == 2) {
    const double alpha = std::acos(a);
    const double beta = std::asin(gamma);
    const double lo = std::max(-alpha, -std::numbers::pi + beta);
    const double hi = std::min(alpha, -beta);
    return std::max(0.0, hi - lo) / (2.0 * std::numbers::pi);
  }
  // w2 = cos(phi), the rest sin(phi) * xi with xi on S^{n-2}; need xi1 > a / sin(phi)
  const double phiLo = std::acos(-gamma);
  std::vector<double> pts{phiLo, std::numbers::pi};
  if (std::abs(a) > 0.0 && std::abs(a) < 1.0) {
    const double kink = std::numbers::pi - std::asin(std::abs(a));
    if (kink > phiLo) pts.push_back(kink);
  }
  std::sort(pts.begin(), pts.end());
  const auto segs = make_segments(pts, std::numbers::pi);
  const double v = integrate_segments(
                       [&](double phi) {
                         const double sphi = std::sin(phi);
                         if (sphi <= 0.0) return 0.0;
                         return std::pow(sphi, n - 2) * cap_fraction_from_cos(n - 1, a / sphi);
                       },
                       segs, cfg)
                       .value;
  return v * sphere_area(n - 1) / sphere_area(n);
}

}  // namespace

ProofSideBound proof_side_bound(const CurveContext& ctx, const SplitSpec& specIn) {
  const Params& P = ctx.params();
  const int n = P.n;
  const SplitSpec spec = specIn.m1 <= specIn.m2 ? specIn : specIn.swapped();
  if (!(spec.T1 > 0.0)) throw std::invalid_argument("proof_side_bound: the smaller part needs positive trace");
  QuadratureConfig cfg = ctx.config();
  cfg.relTol = std::max(cfg.relTol, 1e-8);

  const SolvedS sol1 = ctx.solve_s_for_T(spec.T1);
  const TranslatedProfile tp1 = sol1.profile();
  const NormalizedExtremal ne1 = normalize(tp1, ctx.config());
  const double N = ne1.lpStarNormalizer;
  const double s1 = tp1.s();
  const double rMin = std::max(0.0, -s1);
  const double umax = (s1 >= 0.0 ? tp1.at(0.0, 0.0).value : tp1.at(rMin, 0.0).value) / N;

  ProofSideBound out;
  out.supNorm = umax;
  out.measuredGap = binding_gap(ctx, spec).gap;

  auto a_bar = [&](double c) {
    // U_{T1} >= c * sup holds for r <= rMax
    auto level = [&](double r) { return tp1.at(r, r - rMin).value / N - c * umax; };
    double hi = std::max(1.0, 2.0 * rMin);
    while (level(hi) > 0.0) hi *= 2.0;
    const double rMax = level(rMin) <= 0.0 ? rMin : find_root_bracketed(level, {rMin, hi}, 1e-12 * hi);
    if (!(rMax > rMin)) return 0.0;
    const double v = integrate(
                         [&](double r) {
                           if (r <= 0.0) return 0.0;
                           const ProfileValue pv = tp1.at(r, r - rMin);
                           if (pv.gradMagnitude <= 0.0) return 0.0;
                           const double gamma = c * N / pv.gradMagnitude;
                           const double frac = angular_fraction(n, -s1 / r, gamma, cfg);
                           return std::pow(pv.value / N, P.pStar) * sphere_area(n) * std::pow(r, n - 1) * frac;
                         },
                         rMin, rMax, cfg)
                         .value;
    return std::pow(spec.m1, P.pStar) * v / 3.0;
  };

  double best = -1.0;
  for (int k = 1; k <= 16; ++k) {
    const double c = std::ldexp(1.0, -k);
    const double a = a_bar(c);
    if (a * c * c * c > best) {
      best = a * c * c * c;
      out.cBar = c;
      out.aBar = a;
    }
  }

  const SolvedS sol = ctx.solve_s_for_T(spec.T);
  if (sol.s < 0.0) {
    out.epsilon = -sol.s;
  } else {
    const NormalizedExtremal ne = normalize(sol.profile(), ctx.config());
    const double sup = sol.profile().at(0.0, 0.0).value / ne.lpStarNormalizer;
    const double C = std::pow(sup, P.pStar) * sphere_area(n) / n;
    out.epsilon = std::pow(out.aBar / C, 1.0 / n);
  }
  out.c0 = out.aBar * std::pow(out.cBar, 3) * std::pow(umax, -static_cast<double>(n) / (n - P.p)) * out.epsilon / 2.0;
  return out;
}

}  // namespace tsl
