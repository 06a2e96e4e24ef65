#include "tsl/split_construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tsl {

SplitSpec symmetric_split(double T, const Params& P) {
  return split_complement(T, std::pow(0.5, 1.0 / P.pStar), T * std::pow(0.5, 1.0 / P.pSharp), P);
}

namespace {

QuadratureConfig construction_config(const QuadratureConfig& cfg) {
  QuadratureConfig c = cfg;
  c.relTol = std::min(cfg.relTol, 1e-12);
  return c;
}

PieceNorms piece_norms(const Params& P, const Component& c, const std::string& role,
                       const QuadratureConfig& cfg, double& relErr) {
  const TestNorms nm = TestFunction(P, {c}).norms(cfg, IntegrationMethod::radial);
  relErr = std::max(relErr, nm.maxRelError);
  return {role, c.offset, nm.lpStarMass, nm.traceMass, nm.gradEnergy};
}

// Bump of bulk mass m and trace level Ti cut off at radius R.  A zero trace
// level is realized by a bubble sitting at distance R from the boundary.
Component make_bump(const CurveContext& ctx, double m, double Ti, double R, double offset) {
  const Params& P = ctx.params();
  if (Ti == 0.0) {
    Component c{TranslatedProfile(ProfileFamily::sobolev, R, P)};
    const FullspaceNorms full = fullspace_sobolev_norms(P, ctx.config());
    c.amplitude = m / std::pow(full.lpStarMass, 1.0 / P.pStar);
    c.offset = offset;
    c.cutoff = R;
    return c;
  }
  const TranslatedProfile tp = ctx.solve_s_for_T(Ti).profile();
  const NormalizedExtremal ne = normalize(tp, ctx.config());
  Component c{tp};
  c.amplitude = m / ne.lpStarNormalizer;
  c.offset = offset;
  c.cutoff = R;
  return c;
}

}  // namespace

SplitConstruction build_split_function(const CurveContext& ctx, const SplitSpec& spec, double R, double sep) {
  const Params& P = ctx.params();
  if (!(R > 0.0)) throw std::invalid_argument("build_split_function: R must be positive");
  if (sep == 0.0) sep = 3.0 * R;
  if (!(sep > 2.0 * R)) throw std::invalid_argument("build_split_function: need sep > 2R for disjoint bumps");
  const QuadratureConfig cfg = construction_config(ctx.config());

  SplitConstruction out;
  out.spec = spec;
  out.R = R;
  out.sep = sep;
  out.lhs = std::pow(ctx.phi_value(spec.T), P.p);
  out.rhs = std::pow(spec.m1 * ctx.phi_value(spec.T1), P.p) + std::pow(spec.m2 * ctx.phi_value(spec.T2), P.p);

  // the heavier bump goes to the lower side x2 < 0
  const double off1 = spec.m1 <= spec.m2 ? 0.5 * sep : -0.5 * sep;
  const Component b1 = make_bump(ctx, spec.m1, spec.T1, R, off1);
  const Component b2 = make_bump(ctx, spec.m2, spec.T2, R, -off1);
  double relErr = 0.0;
  out.pieces.push_back(piece_norms(P, b1, "bump1", cfg, relErr));
  out.pieces.push_back(piece_norms(P, b2, "bump2", cfg, relErr));

  const double bulk = out.pieces[0].lpStarMass + out.pieces[1].lpStarMass;
  const double trace = out.pieces[0].traceMass + out.pieces[1].traceMass;
  const double traceTarget = std::pow(spec.T, P.pSharp);
  out.massShortfall = 1.0 - bulk;
  out.traceShortfall = traceTarget - trace;
  out.shortfallBelow10Percent = out.massShortfall < 0.1 && out.traceShortfall < 0.1 * traceTarget;

  std::vector<Component> comps{b1, b2};
  // corrections beyond the lower bump: scale R/64, cut off at R/4.  The trace
  // correction is a hyperbolic translate and also carries some mass; the mass
  // correction is a bubble whose support touches the boundary in one point.
  // Both amplitudes follow in closed form since the supports are disjoint:
  // the trace fixes the first, the remaining mass the second.
  const double cScale = R / 64.0;
  const double cCut = R / 4.0;
  const double lowEdge = -0.5 * sep - R;
  out.correctionSolved = out.massShortfall >= 0.0 && out.traceShortfall >= 0.0;
  if (!out.correctionSolved) out.correctionNote = "bumps exceed a constraint; no nonnegative correction exists";

  Component massFix{TranslatedProfile(ProfileFamily::sobolev, cCut / cScale, P)};
  massFix.scale = cScale;
  massFix.cutoff = cCut;
  massFix.offset = lowEdge - 1.25 * R;
  double unused = 0.0;
  const PieceNorms massUnit = piece_norms(P, massFix, "mass-correction", cfg, unused);
  auto mass_fix_energy = [&](double mass) {
    return mass > 0.0 ? std::pow(mass / massUnit.lpStarMass, P.p / P.pStar) * massUnit.gradEnergy : 0.0;
  };

  double massLeft = out.massShortfall;
  if (out.correctionSolved && out.traceShortfall > 0.0) {
    // pick the translate with the cheapest total correction energy
    bool found = false;
    double bestEnergy = std::numeric_limits<double>::infinity();
    Component best{TranslatedProfile(ProfileFamily::hyperbolic, -1.5, P)};
    for (double s : {-3.0, -2.0, -1.5, -1.2, -1.1, -1.05, -1.02, -1.01, -1.005, -1.002, -1.001}) {
      Component c{TranslatedProfile(ProfileFamily::hyperbolic, s, P)};
      c.scale = cScale;
      c.cutoff = cCut;
      c.offset = lowEdge - 0.5 * R;
      const PieceNorms unit = piece_norms(P, c, "trace-correction", cfg, unused);
      const double amp = std::pow(out.traceShortfall / unit.traceMass, 1.0 / P.pSharp);
      const double mass = std::pow(amp, P.pStar) * unit.lpStarMass;
      if (mass > massLeft) continue;
      const double energy = std::pow(amp, P.p) * unit.gradEnergy + mass_fix_energy(massLeft - mass);
      if (energy < bestEnergy) {
        bestEnergy = energy;
        best = c;
        best.amplitude = amp;
        out.traceCorrectionS = s;
        found = true;
      }
    }
    if (found) {
      comps.push_back(best);
      out.pieces.push_back(piece_norms(P, best, "trace-correction", cfg, relErr));
      massLeft -= out.pieces.back().lpStarMass;
    } else {
      out.correctionSolved = false;
      out.correctionNote = "no trace correction fits inside the mass budget";
    }
  }
  if (out.correctionSolved && massLeft > 0.0) {
    massFix.amplitude = std::pow(massLeft / massUnit.lpStarMass, 1.0 / P.pStar);
    comps.push_back(massFix);
    out.pieces.push_back(piece_norms(P, massFix, "mass-correction", cfg, relErr));
  }

  out.w = TestFunction(P, comps);
  double m = 0.0, t = 0.0, g = 0.0, lower = 0.0;
  for (const auto& pc : out.pieces) {
    m += pc.lpStarMass;
    t += pc.traceMass;
    g += pc.gradEnergy;
    if (pc.offset < 0.0) lower += pc.lpStarMass;
  }
  out.wEnergy = g;
  out.lowerHalfMass = lower;
  out.massResidual = std::abs(std::pow(m, 1.0 / P.pStar) - 1.0);
  out.traceResidual = std::abs(std::pow(t, 1.0 / P.pSharp) - spec.T);
  out.maxRelError = relErr;
  return out;
}

std::vector<SplitEnergyRow> split_energy_convergence(const CurveContext& ctx, const SplitSpec& spec,
                                                     const std::vector<double>& Rschedule) {
  for (std::size_t i = 1; i < Rschedule.size(); ++i)
    if (!(Rschedule[i] > Rschedule[i - 1]))
      throw std::invalid_argument("split_energy_convergence: R schedule must be increasing");
  std::vector<SplitEnergyRow> rows(Rschedule.size());
  std::vector<std::string> errors(Rschedule.size());
  const long count = static_cast<long>(Rschedule.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long k = 0; k < count; ++k) {
    try {
      const SplitConstruction sc = build_split_function(ctx, spec, Rschedule[k]);
      rows[k] = {sc.R, sc.wEnergy, sc.wEnergy - sc.rhs, sc.wEnergy - sc.lhs, sc.massResidual, sc.traceResidual};
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  return rows;
}

}  // namespace tsl
