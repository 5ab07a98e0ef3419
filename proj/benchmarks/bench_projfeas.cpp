#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "projfeas/analysis.hpp"
#include "projfeas/catalog.hpp"
#include "projfeas/engine.hpp"
#include "projfeas/sets.hpp"

using namespace projfeas;

namespace {

Vector point(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

void BM_ProjectBall(benchmark::State& state) {
  const auto set = ConvexSet::ball("B", point(1, 0), 1.0);
  const Vector x = point(3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(project(set, x));
}
BENCHMARK(BM_ProjectBall);

void BM_ProjectPowerEpigraph(benchmark::State& state) {
  const auto set = ConvexSet::power_epigraph("E", 2, static_cast<int>(state.range(0)));
  const Vector x = point(-0.5, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(project(set, x));
}
BENCHMARK(BM_ProjectPowerEpigraph)->Arg(2)->Arg(4)->Arg(8);

void BM_ProjectKktNewton(benchmark::State& state) {
  const auto set = ConvexSet::power_epigraph("E", 2, static_cast<int>(state.range(0))).without_hint();
  const Vector x = point(-0.5, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(project(set, x));
}
BENCHMARK(BM_ProjectKktNewton)->Arg(2)->Arg(4)->Arg(8);

void BM_ProjectQuarticBall(benchmark::State& state) {
  const auto e = catalog::example_5_8(static_cast<int>(state.range(0)));
  const Vector x = e.start;
  for (auto _ : state) benchmark::DoNotOptimize(project(e.problem.set(0), x));
}
BENCHMARK(BM_ProjectQuarticBall)->Arg(2)->Arg(4);

void BM_CyclicExample51(benchmark::State& state) {
  const auto e = catalog::example_5_1();
  CyclicOptions opts;
  opts.max_sweeps = static_cast<std::uint64_t>(state.range(0));
  opts.stop_tol = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(cyclic_project(e.problem, e.start, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 4);
}
BENCHMARK(BM_CyclicExample51)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_AlternatingExample55(benchmark::State& state) {
  const auto e = catalog::example_5_5();
  AlternatingOptions opts;
  opts.max_iterations = static_cast<std::uint64_t>(state.range(0));
  opts.stop_tol = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(alternating_project(e.problem.set(0), e.problem.set(1), e.start, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AlternatingExample55)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_FitPowerRate(benchmark::State& state) {
  std::vector<ErrorPoint> errors;
  for (std::uint64_t k = 1; k <= static_cast<std::uint64_t>(state.range(0)); ++k) {
    errors.push_back({k, 1.0 / std::sqrt(static_cast<double>(k))});
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_power_rate(errors, {1, errors.back().k}));
}
BENCHMARK(BM_FitPowerRate)->Arg(1'000)->Arg(100'000);

void BM_ErrorBoundProbe(benchmark::State& state) {
  const auto e = catalog::example_5_1();
  ProbeOptions opts;
  opts.samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(error_bound_probe(e.problem, e.known_limit, opts));
}
BENCHMARK(BM_ErrorBoundProbe)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
