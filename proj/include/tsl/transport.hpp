#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace tsl {

/// Weighted atoms in R^dim.  Coordinates are stored row-major.
struct DiscreteMeasure {
  int dim = 2;
  std::vector<double> coords;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  void add(std::span<const double> x, double w);
  double total() const;
  /// Throws std::invalid_argument on negative weights, a total away from 1 by
  /// more than tol, or a point with x1 < 0.
  void validate(double tol = 1e-12) const;
};

struct PlanEntry {
  std::size_t source = 0;
  std::size_t target = 0;
  double mass = 0.0;
};

struct TransportPlan {
  std::vector<PlanEntry> entries;  // sorted by (source, target)
  double cost = 0.0;               // sum of mass * |x - y|^2
  std::size_t pivots = 0;
};

/// Raised when an instance exceeds the exact solver's size cap.
class SizeCapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kMaxAtomsPerSide = 2000;

/// Exact optimal coupling for the squared Euclidean cost by the primal
/// network simplex method on the bipartite transportation graph.  Weights are
/// quantized to integer multiples of 1/(2520 * 2^40) of the total (largest-remainder
/// rounding), so pivoting is exact; potentials are carried in long double.
/// Pivot selection is block search over arcs in lexicographic (source,
/// target) order with a strongly feasible basis, which makes the result
/// deterministic and prevents cycling.
TransportPlan solve_exact_plan(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

double squared_distance(std::span<const double> x, std::span<const double> y);

struct MonotonicityCertificate {
  double minTwoCycleValue = 0.0;  // min over support pairs of <x_a - x_b, y_a - y_b>
  std::vector<std::pair<std::size_t, std::size_t>> violatingPairs;  // entry indices, capped
  std::size_t cyclesChecked = 0;     // random m-cycles, 3 <= m <= 4
  std::size_t cyclesViolated = 0;
  double tol = 0.0;
  bool passes() const { return minTwoCycleValue >= -tol && cyclesViolated == 0; }
};

/// Two-cycle inequality over all pairs of plan entries plus `randomCycles`
/// random 3- and 4-cycles drawn with the given seed.
MonotonicityCertificate check_cyclical_monotonicity(const TransportPlan& plan, const DiscreteMeasure& mu,
                                                    const DiscreteMeasure& nu, double tol = 1e-12,
                                                    std::size_t randomCycles = 0, std::uint64_t seed = 1);

/// Moves min(mass_a, mass_b) of entries a and b onto the crossed pairs
/// (source_a, target_b) and (source_b, target_a); marginals are unchanged.
TransportPlan swap_entries(const TransportPlan& plan, std::size_t a, std::size_t b, const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu);

/// Mass-weighted average target of each source atom.
std::vector<std::vector<double>> barycentric_map(const TransportPlan& plan, const DiscreteMeasure& mu,
                                                 const DiscreteMeasure& nu);

/// Largest row or column marginal mismatch of a plan.
double marginal_error(const TransportPlan& plan, const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Minimum cost over all permutations; equal-weight instances of equal size
/// (at most 10 atoms).  Reference for the exact solver.
double brute_force_assignment_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Equal-weight instance with `atoms` points per side, uniform in
/// [0, 1] x [-1, 1], reproducible from seed.
std::pair<DiscreteMeasure, DiscreteMeasure> random_assignment_instance(std::size_t atoms, std::uint64_t seed);

/// Exact solver against brute force on random equal-weight instances with
/// 2..maxAtoms atoms per side, plus the monotonicity certificate of every
/// optimal plan and of every plan obtained by swapping two of its entries.
struct ExactSuiteReport {
  std::size_t instances = 0;
  double maxCostDiff = 0.0;        // |solver - brute force|, absolute
  std::size_t costMismatches = 0;  // instances with diff > 1e-12 (1 + cost)
  std::size_t monotoneFailures = 0;
  std::size_t swapsTried = 0;
  std::size_t swapsUndetected = 0;  // swapped plans that still pass
  double maxMarginalError = 0.0;
  bool all_pass() const { return costMismatches == 0 && monotoneFailures == 0 && swapsUndetected == 0; }
};
ExactSuiteReport run_exact_ot_suite(std::size_t instances, std::uint64_t seed, std::size_t maxAtoms = 8);
ExactSuiteReport run_exact_ot_suite_serial(std::size_t instances, std::uint64_t seed, std::size_t maxAtoms = 8);

}  // namespace tsl
