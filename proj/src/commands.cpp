#include "tsl/commands.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace tsl {

namespace {

std::string fmt(double x) { return format_real(x); }

Json base_echo(const RunConfig& cfg) {
  Json j = Json::object();
  j["command"] = cfg.command;
  j["n"] = cfg.n;
  j["p"] = cfg.p;
  return j;
}

CurveContext make_context(const RunConfig& cfg) {
  return CurveContext(make_params(cfg.n, cfg.p), QuadratureConfig{});
}

std::vector<double> t_grid(const RunConfig& cfg, double lo, double hi, int count) {
  return cfg.tGrid.empty() ? geometric_grid(lo, hi, count) : parse_grid(cfg.tGrid);
}

void merge(CommandResult& into, const std::string& section, const CommandResult& part) {
  into.envelope.records[section] = part.envelope.records;
  for (const auto& c : part.envelope.certificates)
    into.envelope.certificates.push_back({section + "/" + c.name, c.pass, c.detail});
  for (const auto& w : part.envelope.warnings) into.envelope.warnings.push_back(section + ": " + w);
}

}  // namespace

std::vector<double> geometric_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw std::invalid_argument("geometric_grid: need 0 < lo < hi and count >= 2");
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

double resolve_level(const std::string& level, const FundamentalConstants& c) {
  auto scaled = [&](const std::string& suffix, double base) -> std::optional<double> {
    if (level.size() < suffix.size() || level.compare(level.size() - suffix.size(), suffix.size(), suffix) != 0)
      return std::nullopt;
    const std::string k = level.substr(0, level.size() - suffix.size());
    if (k.empty()) return base;
    return parse_list(k).at(0) * base;
  };
  std::optional<double> v = scaled("T0", c.T0);
  if (!v) v = scaled("TE", c.TE);
  if (!v) v = parse_list(level).at(0);
  if (!(*v > 0.0) || !std::isfinite(*v)) throw std::invalid_argument("trace level must be positive: " + level);
  return *v;
}

CommandResult run_constants(const RunConfig& cfg) {
  const CurveContext ctx = make_context(cfg);
  const FundamentalConstants& c = ctx.constants();
  CommandResult r;
  r.envelope.configEcho = base_echo(cfg);
  r.envelope.timestamp = deterministic_timestamp();
  r.envelope.records["constants"] = constants_json(c);
  const double phiT0 = ctx.phi_value(c.T0);
  const double relT0 = std::abs(phiT0 / c.sobolevFloor - 1.0);
  const double relTE = std::abs(c.phiTE / (c.E * c.TE) - 1.0);
  r.envelope.records["phiT0"] = real_json(phiT0);
  r.envelope.certify("phi_T0_equals_floor", relT0 < 1e-6, "rel " + fmt(relT0));
  r.envelope.certify("phi_TE_equals_escobar_line", relTE < 1e-6, "rel " + fmt(relTE));
  r.table = Table{{"name", "value"}, {}};
  for (const auto& [k, v] : r.envelope.records["constants"].items()) r.table.add_row({k, v});
  return r;
}

CommandResult run_curve(const RunConfig& cfg) {
  const CurveContext ctx = make_context(cfg);
  const FundamentalConstants& c = ctx.constants();
  const std::vector<double> grid = t_grid(cfg, c.T0 / 20.0, 30.0 * c.TE, 200);
  const CurveScan scan = scan_curve(ctx, grid);
  CommandResult r;
  r.envelope.configEcho = base_echo(cfg);
  r.envelope.configEcho["tGrid"] = cfg.tGrid.empty() ? "geometric T0/20..30TE x200" : cfg.tGrid;
  r.envelope.timestamp = deterministic_timestamp();
  r.envelope.records["constants"] = constants_json(c);
  r.table = phi_table(scan.points);
  r.plot = curve_plot_data(scan, c, ctx.params());
  r.envelope.records["points"] = table_json(r.table);
  const ShapeReport& s = scan.shape;
  Json failures = Json::array();
  for (const auto& f : s.failures)
    failures.push_back({{"certificate", f.certificate}, {"index", f.index}, {"T", real_json(f.T)}, {"value", real_json(f.value)}});
  r.envelope.records["shapeFailures"] = failures;
  r.envelope.records["lastTailRatio"] = real_json(s.lastTailRatio);
  r.envelope.records["lastTailExcess"] = real_json(s.lastTailExcess);
  r.envelope.certify("decreasing_below_T0", s.decreasingBelowT0);
  r.envelope.certify("increasing_above_T0", s.increasingAboveT0);
  r.envelope.certify("convex_above_T0", s.convexAboveT0);
  r.envelope.certify("above_asymptote", s.aboveAsymptote);
  r.envelope.certify("above_lower_bounds", s.aboveLowerBounds);
  r.envelope.certify("tail_ratio_decreasing", s.tailRatioDecreasing, "last ratio - 1 = " + fmt(s.lastTailExcess));
  return r;
}

CommandResult run_identity(const RunConfig& cfg) {
  const CurveContext ctx = make_context(cfg);
  const FundamentalConstants& c = ctx.constants();
  const std::vector<double> grid = t_grid(cfg, c.T0 / 4.0, 10.0 * c.TE, 20);
  std::vector<IdentityCheck> checks(grid.size());
  const long count = static_cast<long>(grid.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long k = 0; k < count; ++k) checks[k] = verify_transport_identity(ctx, grid[k]);
  CommandResult r;
  r.envelope.configEcho = base_echo(cfg);
  r.envelope.configEcho["tGrid"] = cfg.tGrid.empty() ? "geometric T0/4..10TE x20" : cfg.tGrid;
  r.envelope.timestamp = deterministic_timestamp();
  r.table = identity_table(checks);
  r.envelope.records["rows"] = table_json(r.table);
  double worst = 0.0;
  for (const auto& ch : checks) worst = std::max(worst, std::abs(ch.residual));
  r.envelope.records["maxResidual"] = real_json(worst);
  r.envelope.certify("identity_residual_below_1e-8", worst < 1e-8, "max " + fmt(worst));
  return r;
}

CommandResult run_binding(const RunConfig& cfg) {
  const CurveContext ctx = make_context(cfg);
  const double T = resolve_level(cfg.level, ctx.constants());
  const BindingScan scan = scan_binding_grid(ctx, T, cfg.gridRes, cfg.margin);
  const std::vector<GapResult> corner = corner_path(ctx, T, {0.4, 0.2, 0.1, 0.05, 0.02});
  CommandResult r;
  r.envelope.configEcho = base_echo(cfg);
  r.envelope.configEcho["level"] = cfg.level;
  r.envelope.configEcho["grid"] = cfg.gridRes;
  r.envelope.configEcho["margin"] = cfg.margin;
  r.envelope.configEcho["seed"] = cfg.seed;
  r.envelope.timestamp = deterministic_timestamp();
  r.table = gap_table(scan.table);
  Json& rec = r.envelope.records;
  rec["T"] = real_json(T);
  rec["minGap"] = real_json(scan.minGap);
  rec["argmin"] = table_json(gap_table({binding_gap(ctx, scan.argmin)}))[0];
  rec["uncertified"] = table_json(gap_table(scan.uncertified));
  rec["corner"] = table_json(gap_table(corner));
  r.envelope.certify("gap_certified_on_grid", scan.all_certified() && scan.minGap > 0.0,
                     "minGap " + fmt(scan.minGap) + ", uncertified " + std::to_string(scan.uncertified.size()));
  bool decreasing = true;
  for (std::size_t i = 1; i < corner.size(); ++i) decreasing = decreasing && corner[i].gap < corner[i - 1].gap;
  r.envelope.certify("corner_gap_decreasing", decreasing);
  const double lastRel = corner.back().gap / corner.back().lhs;
  r.envelope.certify("corner_gap_vanishing", lastRel < 0.01, "gap/lhs " + fmt(lastRel) + " at m2 = 0.02");
  Json parts = Json::array();
  bool partitionsHold = true;
  for (int k : {3, 4}) {
    for (const auto& pc : check_random_partitions(ctx, T, k, 10, cfg.seed + static_cast<std::uint64_t>(k))) {
      partitionsHold = partitionsHold && pc.holds();
      parts.push_back({{"parts", k}, {"lhs", real_json(pc.lhs)}, {"rhs", real_json(pc.rhs)}, {"errBound", real_json(pc.errBound)}});
    }
  }
  rec["partitions"] = parts;
  r.envelope.certify("finite_partitions_hold", partitionsHold);
  return r;
}

CommandResult run_split(const RunConfig& cfg) {
  const CurveContext ctx = make_context(cfg);
  const Params& P = ctx.params();
  const double T = resolve_level(cfg.level, ctx.constants());
  const SplitSpec spec = cfg.m1 > 0.0 ? split_complement(T, cfg.m1, cfg.t1, P) : symmetric_split(T, P);
  const std::vector<double> Rs = parse_list(cfg.rSchedule);
  const std::vector<SplitEnergyRow> rows = split_energy_convergence(ctx, spec, Rs);
  const SplitConstruction last = build_split_function(ctx, spec, Rs.back());
  CommandResult r;
  r.envelope.configEcho = base_echo(cfg);
  r.envelope.configEcho["level"] = cfg.level;
  r.envelope.configEcho["m1"] = cfg.m1;
  r.envelope.configEcho["t1"] = cfg.t1;
  r.envelope.configEcho["rSchedule"] = cfg.rSchedule;
  r.envelope.timestamp = deterministic_timestamp();
  r.table = split_energy_table(rows);
  r.envelope.records["convergence"] = table_json(r.table);
  r.envelope.records["construction"] = split_json(last);
  double residual = 0.0, worstBelow = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    residual = std::max({residual, rows[i].massResidual, rows[i].traceResidual});
    worstBelow = std::min(worstBelow, rows[i].aboveInfimum);
    if (i > 0) monotone = monotone && rows[i].excess < rows[i - 1].excess;
  }
  r.envelope.certify("constraint_residuals", residual <= 1e-10, "max " + fmt(residual));
  r.envelope.certify("competitor_energy", worstBelow >= -1e-6, "min wEnergy - Phi^p " + fmt(worstBelow));
  r.envelope.certify("excess_decreasing", monotone);
  r.envelope.certify("lower_half_mass", last.lowerHalfMass >= 0.5, fmt(last.lowerHalfMass));
  if (Rs.back() >= 64.0) {
    const double rel = rows.back().excess / last.rhs;
    r.envelope.certify("excess_below_1pct_at_large_R", rel < 0.01, "excess/rhs " + fmt(rel) + " at R = " + fmt(Rs.back()));
  }
  return r;
}

CommandResult run_transport(const RunConfig& cfg) {
  if (cfg.n != 2) throw std::invalid_argument("transport probes run in the plane: use --n 2");
  const CurveContext ctx = make_context(cfg);
  const Params& P = ctx.params();
  const double T = resolve_level(cfg.level, ctx.constants());
  CommandResult r;
  r.envelope.configEcho = base_echo(cfg);
  r.envelope.configEcho["level"] = cfg.level;
  r.envelope.configEcho["seed"] = cfg.seed;
  r.envelope.configEcho["instances"] = cfg.instances;
  r.envelope.configEcho["splitR"] = cfg.splitR;
  r.envelope.configEcho["sepSchedule"] = cfg.sepSchedule;
  r.envelope.configEcho["atoms"] = cfg.atoms;
  r.envelope.configEcho["slope"] = cfg.slope;
  r.envelope.configEcho["deficitSuite"] = cfg.deficitSuite;
  r.envelope.timestamp = deterministic_timestamp();
  Json& rec = r.envelope.records;

  const ExactSuiteReport suite = run_exact_ot_suite(cfg.instances, cfg.seed);
  rec["exact"] = {{"instances", suite.instances},       {"maxCostDiff", real_json(suite.maxCostDiff)},
                  {"costMismatches", suite.costMismatches}, {"monotoneFailures", suite.monotoneFailures},
                  {"swapsTried", suite.swapsTried},      {"swapsUndetected", suite.swapsUndetected},
                  {"maxMarginalError", real_json(suite.maxMarginalError)}};
  r.envelope.certify("exact_cost_matches_brute_force", suite.costMismatches == 0, "max diff " + fmt(suite.maxCostDiff));
  r.envelope.certify("optimal_plans_monotone", suite.monotoneFailures == 0);
  r.envelope.certify("forced_swaps_detected", suite.swapsUndetected == 0,
                     std::to_string(suite.swapsTried) + " swaps");

  const SplitSpec spec = symmetric_split(T, P);
  std::vector<double> seps = parse_list(cfg.sepSchedule);
  r.table = Table{{"sep", "sourceAtoms", "targetAtoms", "muE", "muF", "muEstar", "muFstar", "bBar", "epsilon",
                   "excisedTarget", "excisedSource", "goodMass", "goodStarMass", "aBar", "marginalError",
                   "minTwoCycleValue"},
                  {}};
  bool claim = true, nonincreasing = true, monotone = true, marginals = true;
  double prevE = std::numeric_limits<double>::infinity();
  for (double f : seps) {
    const SplitTransportReport rep =
        split_transport_probe(ctx, spec, cfg.splitR, f * cfg.splitR, cfg.atoms, ConeSpec{cfg.slope});
    const ConeStats& st = rep.cone;
    r.table.add_row({real_json(f * cfg.splitR), rep.sourceAtoms, rep.targetAtoms, real_json(st.muE), real_json(st.muF),
                     real_json(st.muEstar), real_json(st.muFstar), real_json(st.bBar), real_json(st.epsilon),
                     real_json(st.excisedTarget), real_json(st.excisedSource), real_json(st.goodMass),
                     real_json(st.goodStarMass), real_json(rep.proofBound.aBar), real_json(rep.marginalError),
                     real_json(rep.monotonicity.minTwoCycleValue)});
    claim = claim && st.muE <= st.bBar + 0.02;
    nonincreasing = nonincreasing && st.muE <= prevE + 1e-12;
    prevE = st.muE;
    monotone = monotone && rep.monotonicity.passes();
    marginals = marginals && rep.marginalError <= 1e-10;
  }
  rec["cone"] = table_json(r.table);
  r.envelope.certify("muE_below_bBar", claim, "slack 0.02");
  r.envelope.certify("muE_nonincreasing_in_sep", nonincreasing);
  r.envelope.certify("split_plans_monotone", monotone);
  r.envelope.certify("split_plan_marginals", marginals);

  if (cfg.deficitSuite) {
    const NormalizedExtremal ne = normalize(ctx.solve_s_for_T(T).profile(), ctx.config());
    const TestFunction ext = extremal_test_function(ne);
    struct Fixture {
      std::string name;
      TestFunction u;
      bool gated;
    };
    const std::vector<Fixture> fixtures{
        {"extremal", ext, true},
        {"dilated-extremal", ext.dilated(1.7).translated(0.6), true},
        {"split", build_split_function(ctx, spec, cfg.splitR).w, true},
        {"profileBlend-0.2", perturbation_family(ctx, {T, PerturbationMode::profileBlend, 0.2}), true},
        {"boundaryBump-0.1", perturbation_family(ctx, {T, PerturbationMode::boundaryBump, 0.1}), true},
        {"dilationBlend-0.1", perturbation_family(ctx, {T, PerturbationMode::dilationBlend, 0.1}), false},
    };
    const std::size_t coarse = std::max<std::size_t>(16, cfg.atoms / 2);
    Json rows = Json::array();
    bool bound = true, shrinks = true, zero = true;
    for (const auto& fx : fixtures) {
      const DeficitCsCheck a = deficit_cs_check(ctx, fx.u, coarse);
      const DeficitCsCheck b = deficit_cs_check(ctx, fx.u, cfg.atoms);
      const double slackA = std::max(0.0, a.rhs - a.bound) / std::max(a.bound, 1e-300);
      const double slackB = std::max(0.0, b.rhs - b.bound) / std::max(b.bound, 1e-300);
      const bool ok = b.rhs <= 1.25 * b.constant * std::max(b.delta, 0.0) + 1e-10;
      rows.push_back({{"fixture", fx.name},       {"gated", fx.gated},          {"T", real_json(b.T)},
                      {"delta", real_json(b.delta)}, {"constant", real_json(b.constant)},
                      {"rhsCoarse", real_json(a.rhs)}, {"rhs", real_json(b.rhs)},
                      {"ratioCoarse", real_json(a.ratio)}, {"ratio", real_json(b.ratio)}, {"withinBound", ok}});
      if (!fx.gated) continue;
      bound = bound && ok;
      shrinks = shrinks && slackB <= slackA;
      if (fx.name == "extremal" || fx.name == "dilated-extremal") zero = zero && b.rhs < 1e-10;
    }
    rec["deficitCs"] = rows;
    r.envelope.certify("deficit_cs_bound", bound, "rhs <= 1.25 C delta on gated fixtures");
    r.envelope.certify("deficit_cs_slack_shrinks", shrinks);
    r.envelope.certify("deficit_cs_extremals_zero", zero);
  }
  return r;
}

CommandResult run_stability(const RunConfig& cfg) {
  const CurveContext ctx = make_context(cfg);
  const double T = resolve_level(cfg.level, ctx.constants());
  const PerturbationMode mode = parse_mode(cfg.mode);
  const std::vector<double> eps = parse_grid(cfg.epsGrid);
  const std::vector<StabilityRow> rows = stability_ratio_scan(ctx, T, eps, mode);
  CommandResult r;
  r.envelope.configEcho = base_echo(cfg);
  r.envelope.configEcho["level"] = cfg.level;
  r.envelope.configEcho["mode"] = cfg.mode;
  r.envelope.configEcho["epsGrid"] = cfg.epsGrid;
  r.envelope.timestamp = deterministic_timestamp();
  r.table = stability_table(rows);
  r.plot = stability_plot_data(rows);
  Json& rec = r.envelope.records;
  rec["rows"] = table_json(r.table);

  bool nonneg = true, distanceTrend = true;
  double minRatio = std::numeric_limits<double>::infinity(), maxRatio = 0.0;
  std::vector<double> xs, ds;
  const StabilityRow* prev = nullptr;
  for (const auto& row : rows) {
    nonneg = nonneg && row.delta >= -1e-9;
    if (row.ratioDefined) {
      minRatio = std::min(minRatio, row.ratio);
      maxRatio = std::max(maxRatio, row.ratio);
    }
    if (row.epsilon > 0.0) {
      xs.push_back(row.epsilon);
      ds.push_back(row.delta);
    }
    if (prev && row.epsilon > prev->epsilon) distanceTrend = distanceTrend && row.distance > prev->distance;
    prev = &row;
  }
  r.envelope.certify("deficit_nonnegative", nonneg);
  r.envelope.certify("distance_shrinks_with_epsilon", distanceTrend);
  if (cfg.p == 2.0) {
    const double slope = log_log_slope(xs, ds);
    rec["slope"] = real_json(slope);
    rec["ratioRange"] = {real_json(minRatio), real_json(maxRatio)};
    r.envelope.certify("quadratic_slope", std::abs(slope - 2.0) <= 0.2, "slope " + fmt(slope));
    r.envelope.certify("ratio_positive_and_stable", minRatio > 0.0 && maxRatio < 3.0 * minRatio,
                       "ratio in [" + fmt(minRatio) + ", " + fmt(maxRatio) + "]");
  }
  if (cfg.alphaT > 0.0) {
    const GluingReport g = glue_stability(rows, cfg.alphaT, cfg.delta0);
    rec["gluing"] = {{"alphaT", real_json(g.alphaT)}, {"delta0", real_json(g.delta0)}, {"alphaPrime", real_json(g.alphaPrime)}};
    r.envelope.certify("gluing_holds", g.all_hold());
  }

  const CurveContext planar(make_params(2, 1.5), QuadratureConfig{});
  Json ann = Json::array();
  for (const auto& f : annulus_fixture_suite(ctx.params().n == 2 && ctx.params().p == 1.5 ? planar : ctx, planar)) {
    ann.push_back({{"fixture", f.name},
                   {"R", real_json(f.R)},
                   {"epsilonMass", real_json(f.epsilonMass)},
                   {"bulkMass", real_json(f.check.bulkMass)},
                   {"lhs", real_json(f.check.lhs)},
                   {"rhs", real_json(f.check.rhs)},
                   {"applicable", f.check.applicable},
                   {"pass", f.check.pass}});
    r.envelope.certify("annulus_" + f.name, f.check.pass,
                       "lhs " + fmt(f.check.lhs) + " rhs " + fmt(f.check.rhs));
  }
  rec["annulus"] = ann;
  return r;
}

CommandResult run_report(const RunConfig& cfg) {
  CommandResult r;
  r.envelope.configEcho = base_echo(cfg);
  r.envelope.configEcho["seed"] = cfg.seed;
  r.envelope.timestamp = deterministic_timestamp();
  r.table = Table{{"certificate", "pass", "detail"}, {}};

  RunConfig c = cfg;
  merge(r, "constants", run_constants(c));
  {
    const CurveContext ctx = make_context(cfg);
    const FundamentalConstants& k = ctx.constants();
    std::ostringstream g;
    g << format_real(k.T0 / 4.0) << ":" << format_real(10.0 * k.TE) << ":5";
    c.tGrid = g.str();
    merge(r, "identity", run_identity(c));
    std::ostringstream h;
    h << format_real(k.T0 / 4.0) << ":" << format_real(5.0 * k.TE) << ":24";
    c.tGrid = h.str();
    merge(r, "curve", run_curve(c));
  }
  c = cfg;
  c.gridRes = 4;
  merge(r, "binding", run_binding(c));
  c = cfg;
  c.rSchedule = "4,8";
  merge(r, "split", run_split(c));
  c = cfg;
  merge(r, "stability", run_stability(c));
  c = cfg;
  c.n = 2;
  c.p = 1.5;
  c.instances = 20;
  c.atoms = 400;
  c.sepSchedule = "2.5,3.5";
  merge(r, "transport", run_transport(c));
  for (const auto& cert : r.envelope.certificates) r.table.add_row({cert.name, cert.pass, cert.detail});
  return r;
}

int execute(const RunConfig& cfg, std::ostream& out) {
  int threads = cfg.threads;
  if (threads <= 0)
    if (const char* env = std::getenv("TSL_THREADS")) threads = std::atoi(env);
  if (threads > 0) omp_set_num_threads(threads);

  static const std::map<std::string, CommandResult (*)(const RunConfig&)> table{
      {"constants", run_constants}, {"curve", run_curve},         {"identity", run_identity},
      {"binding", run_binding},     {"split", run_split},         {"transport", run_transport},
      {"stability", run_stability}, {"report", run_report}};
  const auto it = table.find(cfg.command);
  if (it == table.end()) throw std::invalid_argument("unknown command: " + cfg.command);
  const CommandResult res = it->second(cfg);
  const TableFormat format = parse_format(cfg.format);
  const std::string text = emit_envelope(res.envelope);
  if (cfg.out.empty())
    out << text;
  else
    write_text_file(cfg.out, text);
  if (!cfg.table.empty()) write_text_file(cfg.table, emit_table(res.table, format));
  if (!cfg.plot.empty()) {
    if (res.plot.columns.empty()) throw std::invalid_argument(cfg.command + " has no plot data");
    write_text_file(cfg.plot, emit_table(res.plot, format));
  }
  return res.envelope.all_pass() ? 0 : 2;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trace Sobolev curve laboratory"};
  app.require_subcommand(1);
  std::map<std::string, RunConfig> configs;

  auto common = [&](CLI::App* sub, RunConfig& c) {
    sub->add_option("--n", c.n, "dimension")->capture_default_str();
    sub->add_option("--p", c.p, "integrability exponent")->capture_default_str();
    sub->add_option("--seed", c.seed, "seed for randomized fixtures")->capture_default_str();
    sub->add_option("--threads", c.threads, "worker threads (default: TSL_THREADS)");
    sub->add_option("--out", c.out, "envelope output path (default: stdout)");
    sub->add_option("--table", c.table, "flat table output path");
    sub->add_option("--format", c.format, "table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  };
  auto add = [&](const std::string& name, const std::string& help) {
    RunConfig& c = configs[name];
    c.command = name;
    if (name == "transport") {
      c.n = 2;
      c.p = 1.5;
    }
    CLI::App* sub = app.add_subcommand(name, help);
    common(sub, c);
    return std::pair<CLI::App*, RunConfig*>(sub, &c);
  };

  add("constants", "fundamental constants S, E, TE, T0 and the floor");
  {
    auto [s, c] = add("curve", "curve scan with shape certificates");
    s->add_option("--T-grid", c->tGrid, "lo:hi:count");
    s->add_option("--plot", c->plot, "plot-data output path");
  }
  {
    auto [s, c] = add("identity", "transport identity residuals");
    s->add_option("--T-grid", c->tGrid, "lo:hi:count");
  }
  {
    auto [s, c] = add("binding", "strict binding gap over the split grid");
    s->add_option("--T", c->level, "trace level (number, T0, TE, 3TE, ...)")->capture_default_str();
    s->add_option("--grid", c->gridRes, "grid resolution")->capture_default_str();
    s->add_option("--margin", c->margin, "corner margin")->capture_default_str();
  }
  {
    auto [s, c] = add("split", "two-bump split construction energies");
    s->add_option("--T", c->level, "trace level")->capture_default_str();
    s->add_option("--m1", c->m1, "bulk part of bump 1 (0: symmetric split)");
    s->add_option("--t1", c->t1, "trace part of bump 1");
    s->add_option("--R-schedule", c->rSchedule, "comma-separated cutoff radii")->capture_default_str();
  }
  {
    auto [s, c] = add("transport", "exact transport, cone and deficit probes (n = 2)");
    s->add_option("--T", c->level, "trace level")->capture_default_str();
    s->add_option("--instances", c->instances, "random brute-force instances")->capture_default_str();
    s->add_option("--R", c->splitR, "split cutoff radius")->capture_default_str();
    s->add_option("--sep-schedule", c->sepSchedule, "separations as multiples of R")->capture_default_str();
    s->add_option("--atoms", c->atoms, "atoms per side")->capture_default_str();
    s->add_option("--slope", c->slope, "flat cone slope")->capture_default_str();
    s->add_flag("--deficit", c->deficitSuite, "run the deficit estimate fixtures");
  }
  {
    auto [s, c] = add("stability", "deficit, distance and stability scan");
    s->add_option("--T", c->level, "base trace level")->capture_default_str();
    s->add_option("--mode", c->mode, "perturbation family")
        ->check(CLI::IsMember({"dilationBlend", "profileBlend", "boundaryBump"}))
        ->capture_default_str();
    s->add_option("--eps-grid", c->epsGrid, "lo:hi:count")->capture_default_str();
    s->add_option("--plot", c->plot, "plot-data output path");
    s->add_option("--alpha-T", c->alphaT, "local stability constant for the gluing report");
    s->add_option("--delta0", c->delta0, "large-deficit threshold for the gluing report")->capture_default_str();
  }
  add("report", "reduced pass over every module");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return 1;
  }
  std::string name;
  for (const auto* sub : app.get_subcommands()) name = sub->get_name();
  try {
    return execute(configs.at(name), out);
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace tsl
