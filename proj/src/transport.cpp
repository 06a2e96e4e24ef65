#include "tsl/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace tsl {

void DiscreteMeasure::add(std::span<const double> x, double w) {
  if (static_cast<int>(x.size()) != dim) throw std::invalid_argument("DiscreteMeasure::add: dimension mismatch");
  coords.insert(coords.end(), x.begin(), x.end());
  weights.push_back(w);
}

double DiscreteMeasure::total() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

void DiscreteMeasure::validate(double tol) const {
  if (dim < 1 || coords.size() != weights.size() * static_cast<std::size_t>(dim))
    throw std::invalid_argument("DiscreteMeasure: coordinate array does not match weights");
  for (std::size_t i = 0; i < size(); ++i) {
    if (!(weights[i] >= 0.0)) throw std::invalid_argument("DiscreteMeasure: negative weight");
    if (point(i)[0] < 0.0) throw std::invalid_argument("DiscreteMeasure: atom outside the closed half-space");
  }
  if (std::abs(total() - 1.0) > tol) throw std::invalid_argument("DiscreteMeasure: total weight is not 1");
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
  double d = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) d += (x[k] - y[k]) * (x[k] - y[k]);
  return d;
}

namespace {

// divisible by 1..10 so equal-weight instances quantize without remainder
constexpr std::int64_t kQuantum = std::int64_t{2520} << 40;

// Integer weights summing exactly to kQuantum, by largest remainder.
std::vector<std::int64_t> quantize(const std::vector<double>& w) {
  const long double total = std::accumulate(w.begin(), w.end(), 0.0L);
  if (!(total > 0.0L)) throw std::invalid_argument("solve_exact_plan: measure has zero mass");
  std::vector<std::int64_t> q(w.size());
  std::vector<long double> frac(w.size());
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const long double x = static_cast<long double>(w[i]) / total * static_cast<long double>(kQuantum);
    const long double f = std::floor(x);
    q[i] = static_cast<std::int64_t>(f);
    frac[i] = x - f;
    sum += q[i];
  }
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  std::int64_t rest = kQuantum - sum;
  for (std::size_t k = 0; rest > 0; k = (k + 1) % order.size()) {
    ++q[order[k]];
    --rest;
  }
  for (std::size_t k = order.size(); rest < 0;) {
    k = k == 0 ? order.size() - 1 : k - 1;
    if (q[order[k]] > 0) {
      --q[order[k]];
      ++rest;
    }
  }
  return q;
}

// Primal network simplex on sources 0..m-1, sinks m..m+n-1 and an artificial
// root m+n.  Every non-tree arc carries zero flow (no capacities), so flows
// are stored per tree node on the arc to its parent.
class NetworkSimplex {
 public:
  NetworkSimplex(std::vector<std::int64_t> supply, std::vector<std::int64_t> demand, std::vector<double> cost)
      : m_(supply.size()), n_(demand.size()), cost_(std::move(cost)) {
    const std::size_t nodes = m_ + n_ + 1;
    root_ = m_ + n_;
    parent_.assign(nodes, kNone);
    predArc_.assign(nodes, kNone);
    up_.assign(nodes, false);
    flow_.assign(nodes, 0);
    depth_.assign(nodes, 0);
    pi_.assign(nodes, 0.0L);
    children_.assign(nodes, {});
    double maxCost = 0.0;
    for (double c : cost_) maxCost = std::max(maxCost, c);
    artificial_ = (1.0L + maxCost) * static_cast<long double>(nodes);
    for (std::size_t i = 0; i < m_; ++i) attach_root(i, true, supply[i]);
    for (std::size_t j = 0; j < n_; ++j) attach_root(m_ + j, false, demand[j]);
    const std::size_t arcs = m_ * n_;
    block_ = std::max<std::size_t>(10, static_cast<std::size_t>(std::sqrt(static_cast<double>(arcs))));
  }

  void run() {
    while (true) {
      const std::size_t arc = select_entering();
      if (arc == kNone) break;
      pivot(arc);
      ++pivots_;
    }
    for (std::size_t v = 0; v < root_; ++v) {
      if (predArc_[v] >= m_ * n_ && flow_[v] > 0)
        throw std::runtime_error("solve_exact_plan: infeasible instance (unequal totals)");
    }
  }

  std::size_t pivots() const { return pivots_; }

  // Tree arcs with positive flow on real arcs.
  std::vector<std::pair<std::size_t, std::int64_t>> flows() const {
    std::vector<std::pair<std::size_t, std::int64_t>> out;
    for (std::size_t v = 0; v < root_; ++v)
      if (predArc_[v] < m_ * n_ && flow_[v] > 0) out.emplace_back(predArc_[v], flow_[v]);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::size_t arc_source(std::size_t a) const { return a < m_ * n_ ? a / n_ : a - m_ * n_; }
  std::size_t arc_target(std::size_t a) const { return a < m_ * n_ ? m_ + a % n_ : root_; }
  long double arc_cost(std::size_t a) const {
    return a < m_ * n_ ? static_cast<long double>(cost_[a]) : artificial_;
  }

  void attach_root(std::size_t v, bool isSource, std::int64_t amount) {
    // artificial arc index m*n + v; sources point to the root, the root to sinks
    parent_[v] = root_;
    predArc_[v] = m_ * n_ + v;
    up_[v] = isSource;
    flow_[v] = amount;
    depth_[v] = 1;
    pi_[v] = isSource ? -artificial_ : artificial_;
    children_[root_].push_back(v);
  }

  long double reduced_cost(std::size_t a) const {
    return arc_cost(a) + pi_[a / n_] - pi_[m_ + a % n_];
  }

  std::size_t select_entering() {
    const std::size_t arcs = m_ * n_;
    const long double tol = -1e-13L * (1.0L + scale());
    std::size_t best = kNone;
    long double bestRc = tol;
    std::size_t scanned = 0, inBlock = 0;
    for (std::size_t k = 0; k < arcs; ++k) {
      const std::size_t a = (next_ + k) % arcs;
      const long double rc = reduced_cost(a);
      if (rc < bestRc) {
        bestRc = rc;
        best = a;
      }
      ++scanned;
      if (++inBlock == block_) {
        inBlock = 0;
        if (best != kNone) {
          next_ = (a + 1) % arcs;
          return best;
        }
      }
    }
    (void)scanned;
    return best;
  }

  long double scale() const {
    if (scale_ < 0.0L) {
      long double s = 0.0L;
      for (double c : cost_) s = std::max<long double>(s, c);
      scale_ = s;
    }
    return scale_;
  }

  void remove_child(std::size_t parent, std::size_t child) {
    auto& ch = children_[parent];
    ch.erase(std::find(ch.begin(), ch.end(), child));
  }

  void pivot(std::size_t arc) {
    const std::size_t first = arc_source(arc);
    const std::size_t second = arc_target(arc);
    // join node of the cycle
    std::size_t a = first, b = second;
    while (a != b) {
      if (depth_[a] >= depth_[b]) a = parent_[a];
      else b = parent_[b];
    }
    const std::size_t join = a;
    // leaving arc: the last blocking arc in cycle orientation
    std::int64_t delta = std::numeric_limits<std::int64_t>::max();
    std::size_t out = kNone;
    bool outOnFirst = false;
    for (std::size_t u = first; u != join; u = parent_[u]) {
      if (up_[u] && flow_[u] < delta) {
        delta = flow_[u];
        out = u;
        outOnFirst = true;
      }
    }
    for (std::size_t u = second; u != join; u = parent_[u]) {
      if (!up_[u] && flow_[u] <= delta) {
        delta = flow_[u];
        out = u;
        outOnFirst = false;
      }
    }
    if (out == kNone) throw std::runtime_error("solve_exact_plan: unbounded pivot");
    if (delta > 0) {
      for (std::size_t u = first; u != join; u = parent_[u]) flow_[u] += up_[u] ? -delta : delta;
      for (std::size_t u = second; u != join; u = parent_[u]) flow_[u] += up_[u] ? delta : -delta;
    }
    // re-hang the subtree below the leaving arc from the entering arc
    const std::size_t uIn = outOnFirst ? first : second;
    const std::size_t vIn = outOnFirst ? second : first;
    std::vector<std::size_t> path;
    for (std::size_t x = uIn; x != out; x = parent_[x]) path.push_back(x);
    path.push_back(out);
    remove_child(parent_[out], out);
    std::vector<std::size_t> oldArc(path.size());
    std::vector<char> oldUp(path.size());
    std::vector<std::int64_t> oldFlow(path.size());
    for (std::size_t t = 0; t < path.size(); ++t) {
      oldArc[t] = predArc_[path[t]];
      oldUp[t] = up_[path[t]];
      oldFlow[t] = flow_[path[t]];
    }
    for (std::size_t t = path.size() - 1; t >= 1; --t) {
      const std::size_t x = path[t];
      const std::size_t y = path[t - 1];
      remove_child(x, y);
      children_[y].push_back(x);
      parent_[x] = y;
      predArc_[x] = oldArc[t - 1];
      up_[x] = !oldUp[t - 1];
      flow_[x] = oldFlow[t - 1];
    }
    parent_[uIn] = vIn;
    predArc_[uIn] = arc;
    up_[uIn] = outOnFirst;  // the entering arc runs first -> second
    flow_[uIn] = delta;
    children_[vIn].push_back(uIn);
    // depths and potentials of the moved subtree
    std::vector<std::size_t> stack{uIn};
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      const std::size_t p = parent_[x];
      depth_[x] = depth_[p] + 1;
      const long double c = arc_cost(predArc_[x]);
      pi_[x] = up_[x] ? pi_[p] - c : pi_[p] + c;
      for (std::size_t ch : children_[x]) stack.push_back(ch);
    }
  }

  std::size_t m_, n_, root_ = 0;
  std::vector<double> cost_;
  std::vector<std::size_t> parent_, predArc_, depth_;
  std::vector<char> up_;
  std::vector<std::int64_t> flow_;
  std::vector<long double> pi_;
  std::vector<std::vector<std::size_t>> children_;
  long double artificial_ = 0.0L;
  mutable long double scale_ = -1.0L;
  std::size_t block_ = 10, next_ = 0, pivots_ = 0;
};

}  // namespace

TransportPlan solve_exact_plan(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.size() > kMaxAtomsPerSide || nu.size() > kMaxAtomsPerSide)
    throw SizeCapError("solve_exact_plan: more than " + std::to_string(kMaxAtomsPerSide) + " atoms on a side");
  if (mu.dim != nu.dim) throw std::invalid_argument("solve_exact_plan: dimension mismatch");
  if (mu.size() == 0 || nu.size() == 0) throw std::invalid_argument("solve_exact_plan: empty measure");
  if (std::abs(mu.total() - nu.total()) > 1e-10 * std::max(1.0, mu.total()))
    throw std::invalid_argument("solve_exact_plan: measures have different total mass");
  const double total = mu.total();
  const auto qa = quantize(mu.weights);
  const auto qb = quantize(nu.weights);
  // drop atoms that quantize to zero
  std::vector<std::size_t> src, dst;
  for (std::size_t i = 0; i < qa.size(); ++i)
    if (qa[i] > 0) src.push_back(i);
  for (std::size_t j = 0; j < qb.size(); ++j)
    if (qb[j] > 0) dst.push_back(j);
  std::vector<std::int64_t> supply, demand;
  for (std::size_t i : src) supply.push_back(qa[i]);
  for (std::size_t j : dst) demand.push_back(qb[j]);
  std::vector<double> cost(src.size() * dst.size());
  for (std::size_t a = 0; a < src.size(); ++a)
    for (std::size_t b = 0; b < dst.size(); ++b)
      cost[a * dst.size() + b] = squared_distance(mu.point(src[a]), nu.point(dst[b]));

  NetworkSimplex ns(std::move(supply), std::move(demand), cost);
  ns.run();
  TransportPlan plan;
  plan.pivots = ns.pivots();
  for (const auto& [arc, f] : ns.flows()) {
    const std::size_t a = arc / dst.size();
    const std::size_t b = arc % dst.size();
    const double mass = static_cast<double>(f) / static_cast<double>(kQuantum) * total;
    plan.entries.push_back({src[a], dst[b], mass});
    plan.cost += mass * cost[arc];
  }
  return plan;
}

MonotonicityCertificate check_cyclical_monotonicity(const TransportPlan& plan, const DiscreteMeasure& mu,
                                                    const DiscreteMeasure& nu, double tol,
                                                    std::size_t randomCycles, std::uint64_t seed) {
  MonotonicityCertificate cert;
  cert.tol = tol;
  cert.minTwoCycleValue = std::numeric_limits<double>::infinity();
  const auto& E = plan.entries;
  const int d = mu.dim;
  constexpr std::size_t kMaxListed = 64;
  for (std::size_t a = 0; a < E.size(); ++a) {
    const auto xa = mu.point(E[a].source);
    const auto ya = nu.point(E[a].target);
    for (std::size_t b = a + 1; b < E.size(); ++b) {
      const auto xb = mu.point(E[b].source);
      const auto yb = nu.point(E[b].target);
      double v = 0.0;
      for (int k = 0; k < d; ++k) v += (xa[k] - xb[k]) * (ya[k] - yb[k]);
      cert.minTwoCycleValue = std::min(cert.minTwoCycleValue, v);
      if (v < -tol && cert.violatingPairs.size() < kMaxListed) cert.violatingPairs.emplace_back(a, b);
    }
  }
  if (E.size() < 2) cert.minTwoCycleValue = 0.0;
  if (randomCycles > 0 && E.size() >= 4) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, E.size() - 1);
    for (std::size_t c = 0; c < randomCycles; ++c) {
      const std::size_t len = 3 + c % 2;
      std::vector<std::size_t> idx;
      while (idx.size() < len) {
        const std::size_t k = pick(rng);
        if (std::find(idx.begin(), idx.end(), k) == idx.end()) idx.push_back(k);
      }
      // sum_i y_i . (x_{i+1} - x_i) <= 0
      double s = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        const auto y = nu.point(E[idx[i]].target);
        const auto x0 = mu.point(E[idx[i]].source);
        const auto x1 = mu.point(E[idx[(i + 1) % len]].source);
        for (int k = 0; k < d; ++k) s += y[k] * (x1[k] - x0[k]);
      }
      ++cert.cyclesChecked;
      if (s > tol) ++cert.cyclesViolated;
    }
  }
  return cert;
}

TransportPlan swap_entries(const TransportPlan& plan, std::size_t a, std::size_t b, const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu) {
  if (a >= plan.entries.size() || b >= plan.entries.size() || a == b)
    throw std::invalid_argument("swap_entries: invalid entry indices");
  TransportPlan out = plan;
  const PlanEntry ea = plan.entries[a];
  const PlanEntry eb = plan.entries[b];
  const double m = std::min(ea.mass, eb.mass);
  out.entries[a].mass -= m;
  out.entries[b].mass -= m;
  out.entries.push_back({ea.source, eb.target, m});
  out.entries.push_back({eb.source, ea.target, m});
  std::vector<PlanEntry> merged;
  std::sort(out.entries.begin(), out.entries.end(), [](const PlanEntry& x, const PlanEntry& y) {
    return std::pair(x.source, x.target) < std::pair(y.source, y.target);
  });
  for (const auto& e : out.entries) {
    if (e.mass <= 0.0) continue;
    if (!merged.empty() && merged.back().source == e.source && merged.back().target == e.target)
      merged.back().mass += e.mass;
    else
      merged.push_back(e);
  }
  out.entries = merged;
  out.cost = 0.0;
  for (const auto& e : out.entries) out.cost += e.mass * squared_distance(mu.point(e.source), nu.point(e.target));
  return out;
}

std::vector<std::vector<double>> barycentric_map(const TransportPlan& plan, const DiscreteMeasure& mu,
                                                 const DiscreteMeasure& nu) {
  std::vector<std::vector<double>> acc(mu.size(), std::vector<double>(mu.dim, 0.0));
  std::vector<double> mass(mu.size(), 0.0);
  for (const auto& e : plan.entries) {
    const auto y = nu.point(e.target);
    for (int k = 0; k < mu.dim; ++k) acc[e.source][k] += e.mass * y[k];
    mass[e.source] += e.mass;
  }
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mass[i] > 0.0)
      for (double& v : acc[i]) v /= mass[i];
    else
      for (int k = 0; k < mu.dim; ++k) acc[i][k] = std::numeric_limits<double>::quiet_NaN();
  }
  return acc;
}

double marginal_error(const TransportPlan& plan, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  std::vector<double> row(mu.size(), 0.0), col(nu.size(), 0.0);
  for (const auto& e : plan.entries) {
    row[e.source] += e.mass;
    col[e.target] += e.mass;
  }
  double err = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) err = std::max(err, std::abs(row[i] - mu.weights[i]));
  for (std::size_t j = 0; j < nu.size(); ++j) err = std::max(err, std::abs(col[j] - nu.weights[j]));
  return err;
}

double brute_force_assignment_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.size() != nu.size() || mu.size() > 10)
    throw std::invalid_argument("brute_force_assignment_cost: needs equal sizes up to 10");
  std::vector<std::size_t> perm(mu.size());
  std::iota(perm.begin(), perm.end(), 0);
  const double w = mu.total() / static_cast<double>(mu.size());
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) c += squared_distance(mu.point(i), nu.point(perm[i]));
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best * w;
}

std::pair<DiscreteMeasure, DiscreteMeasure> random_assignment_instance(std::size_t atoms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u1(0.0, 1.0), u2(-1.0, 1.0);
  DiscreteMeasure mu, nu;
  const double w = 1.0 / static_cast<double>(atoms);
  for (auto* m : {&mu, &nu})
    for (std::size_t i = 0; i < atoms; ++i) {
      const double x[2] = {u1(rng), u2(rng)};
      m->add(x, w);
    }
  return {mu, nu};
}

namespace {

struct InstanceOutcome {
  double costDiff = 0.0;
  bool costMismatch = false;
  bool monotoneFailure = false;
  std::size_t swaps = 0;
  std::size_t undetected = 0;
  double marginal = 0.0;
};

InstanceOutcome run_instance(std::size_t k, std::uint64_t seed, std::size_t maxAtoms) {
  const std::size_t atoms = 2 + k % (maxAtoms - 1);
  const auto [mu, nu] = random_assignment_instance(atoms, seed + 0x9e3779b97f4a7c15ULL * (k + 1));
  const TransportPlan plan = solve_exact_plan(mu, nu);
  const double brute = brute_force_assignment_cost(mu, nu);
  InstanceOutcome out;
  out.costDiff = std::abs(plan.cost - brute);
  out.costMismatch = out.costDiff > 1e-12 * (1.0 + brute);
  out.monotoneFailure = !check_cyclical_monotonicity(plan, mu, nu, 1e-12, 16, seed + k).passes();
  out.marginal = marginal_error(plan, mu, nu);
  for (std::size_t a = 0; a < plan.entries.size(); ++a)
    for (std::size_t b = a + 1; b < plan.entries.size(); ++b) {
      ++out.swaps;
      if (check_cyclical_monotonicity(swap_entries(plan, a, b, mu, nu), mu, nu, 1e-12).passes()) ++out.undetected;
    }
  return out;
}

ExactSuiteReport collect(const std::vector<InstanceOutcome>& rows) {
  ExactSuiteReport r;
  r.instances = rows.size();
  for (const auto& o : rows) {
    r.maxCostDiff = std::max(r.maxCostDiff, o.costDiff);
    r.costMismatches += o.costMismatch;
    r.monotoneFailures += o.monotoneFailure;
    r.swapsTried += o.swaps;
    r.swapsUndetected += o.undetected;
    r.maxMarginalError = std::max(r.maxMarginalError, o.marginal);
  }
  return r;
}

}  // namespace

ExactSuiteReport run_exact_ot_suite(std::size_t instances, std::uint64_t seed, std::size_t maxAtoms) {
  if (maxAtoms < 2 || maxAtoms > 10) throw std::invalid_argument("run_exact_ot_suite: maxAtoms must lie in [2, 10]");
  std::vector<InstanceOutcome> rows(instances);
  const long long count = static_cast<long long>(instances);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long k = 0; k < count; ++k) rows[k] = run_instance(static_cast<std::size_t>(k), seed, maxAtoms);
  return collect(rows);
}

ExactSuiteReport run_exact_ot_suite_serial(std::size_t instances, std::uint64_t seed, std::size_t maxAtoms) {
  if (maxAtoms < 2 || maxAtoms > 10) throw std::invalid_argument("run_exact_ot_suite: maxAtoms must lie in [2, 10]");
  std::vector<InstanceOutcome> rows(instances);
  for (std::size_t k = 0; k < instances; ++k) rows[k] = run_instance(k, seed, maxAtoms);
  return collect(rows);
}

}  // namespace tsl
