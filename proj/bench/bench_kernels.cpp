#include "tsl/binding_gap.hpp"
#include "tsl/phi_curve.hpp"
#include "tsl/stability.hpp"
#include "tsl/transport.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace tsl;

namespace {

const CurveContext& ctx32() {
  static const CurveContext ctx(make_params(3, 2.0), QuadratureConfig{});
  return ctx;
}

std::vector<double> curve_grid() {
  const FundamentalConstants& c = ctx32().constants();
  std::vector<double> g(48);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = c.T0 / 4.0 * std::pow(20.0 * c.TE / c.T0, double(i) / (g.size() - 1));
  return g;
}

void BM_CurveSerial(benchmark::State& st) {
  const auto grid = curve_grid();
  for (auto _ : st) benchmark::DoNotOptimize(scan_curve_serial(ctx32(), grid));
}
void BM_CurveParallel(benchmark::State& st) {
  const auto grid = curve_grid();
  for (auto _ : st) benchmark::DoNotOptimize(scan_curve(ctx32(), grid));
}

void BM_BindingSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(scan_binding_grid_serial(ctx32(), ctx32().constants().TE, 16));
}
void BM_BindingParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(scan_binding_grid(ctx32(), ctx32().constants().TE, 16));
}

const std::vector<double> kEps{0.05, 0.1, 0.15, 0.2};

void BM_StabilitySerial(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(
        stability_ratio_scan_serial(ctx32(), ctx32().constants().T0, kEps, PerturbationMode::dilationBlend));
}
void BM_StabilityParallel(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(stability_ratio_scan(ctx32(), ctx32().constants().T0, kEps, PerturbationMode::dilationBlend));
}

void BM_ExactOtSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(run_exact_ot_suite_serial(100, 1));
}
void BM_ExactOtParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(run_exact_ot_suite(100, 1));
}

}  // namespace

BENCHMARK(BM_CurveSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CurveParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BindingSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BindingParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_StabilitySerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_StabilityParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ExactOtSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ExactOtParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
