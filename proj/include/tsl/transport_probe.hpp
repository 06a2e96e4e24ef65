#pragma once

#include "tsl/phi_curve.hpp"
#include "tsl/split_construction.hpp"
#include "tsl/stability.hpp"
#include "tsl/test_function.hpp"
#include "tsl/transport.hpp"

#include <array>
#include <functional>
#include <vector>

namespace tsl {

/// Cell grid on the plane rectangle [x1lo, x1hi] x [x2lo, x2hi] (x1lo >= 0),
/// uniform with n1 x n2 cells unless explicit cell edges are given.
struct GridSpec {
  double x1lo = 0.0;
  double x1hi = 1.0;
  double x2lo = -1.0;
  double x2hi = 1.0;
  int n1 = 2;
  int n2 = 2;
  int order = 4;  // Gauss-Legendre points per cell and direction
  std::vector<double> edges1;  // optional increasing x1 cell edges
  std::vector<double> edges2;

  std::vector<double> x1_edges() const;
  std::vector<double> x2_edges() const;
};

struct DiscretizedDensity {
  DiscreteMeasure measure;  // cell-centred atoms, weights renormalized to 1
  double premass = 0.0;     // total cell mass before renormalization
  std::size_t dropped = 0;  // cells with zero mass
  std::vector<std::array<double, 4>> cells;  // (x1lo, x1hi, x2lo, x2hi) of each atom's cell
  int order = 4;
};

/// Atoms at cell centres carrying the Gauss-Legendre cell mass of a
/// nonnegative density; empty cells are dropped.
DiscretizedDensity discretize_density(const std::function<double(double, double)>& density, const GridSpec& grid);
/// Density |u|^{p*} of a planar (n = 2) test function.
DiscretizedDensity discretize_test_function(const TestFunction& u, const GridSpec& grid);

/// Bounding rectangle of the support of u (or a tail window for components
/// without cutoff) with at most maxAtoms cells meeting the support.  Edges
/// are graded about each component centre (cell size growing linearly with
/// the distance beyond the component's core scale).
GridSpec fit_grid(const TestFunction& u, std::size_t maxAtoms);

/// int u^{p#-1} |grad u| |S| | -grad u/|grad u| - S/|S| |^2 dx with
/// S = map - s e1.  Each source cell contributes its integral of
/// u^{p#-1} |grad u| times the alignment term evaluated at the atom, where
/// the map is the atom's image.
double deficit_cs_rhs(const TestFunction& u, double s, const DiscretizedDensity& source,
                      const std::vector<std::vector<double>>& mapped);

/// Constant 2 Y_T / (p Phi(T)^{p-1}) of the deficit estimate.
double deficit_cs_constant(const Params& params, double phi, double yT);

/// One optimal-transport probe: u (normalized) against the extremal at the
/// trace level of u, both discretized and coupled exactly.
struct TransportInstance {
  TestFunction u;
  double T = 0.0;
  double s = 0.0;
  TestFunction target;  // unit-mass extremal at level T
  DiscretizedDensity source;
  DiscretizedDensity targetDensity;
  TransportPlan plan;
  std::vector<std::vector<double>> mapped;  // barycentric image of each source atom
};
TransportInstance build_transport_instance(const CurveContext& ctx, const TestFunction& u, std::size_t maxAtoms);

struct DeficitCsCheck {
  double T = 0.0;
  double rhs = 0.0;       // discretized right-hand side
  double delta = 0.0;     // deficit of u
  double constant = 0.0;  // 2 Y_T / (p Phi^{p-1})
  double bound = 0.0;     // constant * delta
  double ratio = 0.0;     // rhs / bound (NaN when bound = 0)
  std::size_t atoms = 0;
};
DeficitCsCheck deficit_cs_check(const CurveContext& ctx, const TestFunction& u, std::size_t maxAtoms);

/// Flat cone |z2| < slope |z1| around the boundary directions.
struct ConeSpec {
  double slope = 0.1;
};

struct ConeStats {
  double upperMass = 0.0;   // mu of source atoms with x2 > 0
  double lowerMass = 0.0;   // mu of source atoms with x2 < 0
  double muE = 0.0;         // upper atoms mapped to y2 < 0
  double muF = 0.0;         // lower atoms mapped to y2 >= 0
  double muEstar = 0.0;     // ... and outside the cone
  double muFstar = 0.0;
  double bBar = 0.0;        // target mass inside the cone
  double epsilon = 0.0;     // excision radius around s e1
  double excisedTarget = 0.0;  // nu(B(s e1, epsilon))
  double excisedSource = 0.0;  // mu{x : |map(x) - s e1| < epsilon}
  double goodMass = 0.0;       // mu of the good set (if supplied)
  double goodStarMass = 0.0;   // ... minus excised atoms and atoms mapped to y2 < 0
  bool claimHolds(double slack) const { return muE <= bBar + slack; }
};
ConeStats cone_exclusion_stats(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               const std::vector<std::vector<double>>& mapped, const ConeSpec& cone, double s,
                               double epsilon, const std::function<bool(double, double)>& goodSet = {});

/// Transport probe of the split construction in the plane: source w^{p*},
/// target U_T^{p*}, cone statistics with the good set of the
/// smaller bump and the excision radius of the analytic gap bound.
struct SplitTransportReport {
  SplitConstruction construction;
  ProofSideBound proofBound;
  double sourcePremass = 0.0;
  double targetPremass = 0.0;
  double targetLpStarMass = 0.0;  // quadrature value of the same mass
  double marginalError = 0.0;
  MonotonicityCertificate monotonicity;
  ConeStats cone;
  std::size_t sourceAtoms = 0;
  std::size_t targetAtoms = 0;
};
SplitTransportReport split_transport_probe(const CurveContext& ctx, const SplitSpec& spec, double R, double sep,
                                           std::size_t maxAtoms, const ConeSpec& cone);

}  // namespace tsl
