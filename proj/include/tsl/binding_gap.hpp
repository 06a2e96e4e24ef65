#pragma once

#include "tsl/phi_curve.hpp"

#include <cstdint>
#include <vector>

namespace tsl {

/// A split of unit bulk mass and trace level T into two parts:
/// m1^{p*} + m2^{p*} = 1 and t1^{p#} + t2^{p#} = T^{p#}.
struct SplitSpec {
  double T = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double T1 = 0.0;  // t1 / m1
  double T2 = 0.0;  // t2 / m2

  SplitSpec swapped() const;
};

/// Completes (T, m1, t1) to a split.  Throws std::invalid_argument unless
/// 0 < m1 < 1 and 0 <= t1 <= T.
SplitSpec split_complement(double T, double m1, double t1, const Params& params);

struct GapResult {
  SplitSpec spec;
  double lhs = 0.0;  // Phi(T)^p
  double rhs = 0.0;  // m1^p Phi(T1)^p + m2^p Phi(T2)^p
  double gap = 0.0;  // rhs - lhs
  double errBound = 0.0;
  bool certified() const { return gap > errBound; }
};

/// Energy gap of a split.  A zero trace part uses Phi(0) = S.
GapResult binding_gap(const CurveContext& ctx, const SplitSpec& spec);
GapResult binding_gap(const SplitSpec& spec, const Params& params, const QuadratureConfig& cfg);

struct BindingScan {
  double T = 0.0;
  int gridRes = 0;
  double margin = 0.0;
  double minGap = 0.0;
  SplitSpec argmin;
  std::vector<GapResult> table;        // row-major in (m1, t1)
  std::vector<GapResult> uncertified;  // gap <= errBound
  bool all_certified() const { return uncertified.empty(); }
};

/// gridRes x gridRes grid with m1 and t1/T uniform on [margin, 1 - margin].
/// Grid points are evaluated in parallel; the minimum is reduced by value,
/// ties broken lexicographically in (m1, t1).
BindingScan scan_binding_grid(const CurveContext& ctx, double T, int gridRes, double margin = 0.05);
BindingScan scan_binding_grid_serial(const CurveContext& ctx, double T, int gridRes, double margin = 0.05);

/// Degenerate corner: T2 = T fixed while m2 runs through the given values.
std::vector<GapResult> corner_path(const CurveContext& ctx, double T, const std::vector<double>& m2Values);

struct PartitionCheck {
  std::vector<double> m;
  std::vector<double> t;
  double lhs = 0.0;  // Phi(T)^p
  double rhs = 0.0;  // sum m_i^p Phi(t_i / m_i)^p
  double errBound = 0.0;
  bool holds() const { return rhs >= lhs - errBound; }
};

/// Random finite partitions with `parts` pieces (weights uniform on (0, 1],
/// normalized), reproducible from seed.
std::vector<PartitionCheck> check_random_partitions(const CurveContext& ctx, double T, int parts,
                                                    int count, std::uint64_t seed);

/// Analytic lower bound c0 = a c^3 ||U_{T1}||_inf^{-n/(n-p)} eps / 2 on the
/// gap, with a and c evaluated for the smaller bump.
struct ProofSideBound {
  double cBar = 0.0;
  double aBar = 0.0;
  double supNorm = 0.0;  // ||U_{T1}||_inf over H
  double epsilon = 0.0;
  double c0 = 0.0;
  double measuredGap = 0.0;
};
ProofSideBound proof_side_bound(const CurveContext& ctx, const SplitSpec& spec);

}  // namespace tsl
