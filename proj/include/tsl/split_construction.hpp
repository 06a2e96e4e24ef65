#pragma once

#include "tsl/binding_gap.hpp"
#include "tsl/test_function.hpp"

#include <string>
#include <vector>

namespace tsl {

/// Norms of one disjointly supported piece of the split function.
struct PieceNorms {
  std::string role;  // "bump1", "bump2", "trace-correction", "mass-correction"
  double offset = 0.0;
  double lpStarMass = 0.0;
  double traceMass = 0.0;
  double gradEnergy = 0.0;
};

/// The two-bump competitor w = W1 + W2 + psi for a split: Wi is mi U_{Ti}
/// cut off at radius R about its centre, the centres sit at x2 = +-sep/2
/// (the heavier bump on the x2 < 0 side), and psi is a pair of small
/// disjoint bumps restoring unit bulk mass and trace level T exactly.
struct SplitConstruction {
  SplitSpec spec;
  double R = 0.0;
  double sep = 0.0;
  TestFunction w;
  std::vector<PieceNorms> pieces;
  double massShortfall = 0.0;   // 1 - bulk mass of W1 + W2
  double traceShortfall = 0.0;  // T^{p#} - trace mass of W1 + W2
  bool shortfallBelow10Percent = false;
  double traceCorrectionS = 0.0;  // translate of the hyperbolic correction profile
  double wEnergy = 0.0;           // int_H |grad w|^p
  double rhs = 0.0;               // m1^p Phi(T1)^p + m2^p Phi(T2)^p
  double lhs = 0.0;               // Phi(T)^p
  double massResidual = 0.0;      // | ||w||_{p*} - 1 |
  double traceResidual = 0.0;     // | ||w||_{p#, boundary} - T |
  double lowerHalfMass = 0.0;     // int over {x2 < 0} of w^{p*}
  double maxRelError = 0.0;
  bool correctionSolved = false;
  std::string correctionNote;
};

/// sep defaults to 3R when passed as 0.  Requires sep > 2R.
SplitConstruction build_split_function(const CurveContext& ctx, const SplitSpec& spec, double R,
                                       double sep = 0.0);

struct SplitEnergyRow {
  double R = 0.0;
  double wEnergy = 0.0;
  double excess = 0.0;       // wEnergy - rhs
  double aboveInfimum = 0.0; // wEnergy - Phi(T)^p
  double massResidual = 0.0;
  double traceResidual = 0.0;
};

std::vector<SplitEnergyRow> split_energy_convergence(const CurveContext& ctx, const SplitSpec& spec,
                                                     const std::vector<double>& Rschedule);

/// Symmetric split m1 = m2, t1 = t2 at trace level T.
SplitSpec symmetric_split(double T, const Params& params);

}  // namespace tsl
