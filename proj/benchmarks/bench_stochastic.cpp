#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "popwave/stochastic.hpp"

using namespace popwave;

namespace {
const DiffusionModel1D kFig2a(Polynomial{0, 1, -0.4, 0.2, 0, -0.5}, 2.0);
const DiffusionModel1D kFig3(Polynomial{0.01, 0.2, 0.1, -0.05}, 2.0);
}  // namespace

static void StationaryFullLine(benchmark::State& state) {
  const Grid1D g(-3, 3, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto p = stationary_pdf_full_line(kFig2a, g);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(StationaryFullLine)->Arg(601)->Arg(6001);

static void ExitTimeQuadrature(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(exit_time(kFig3, 0.0, 4.0));
}
BENCHMARK(ExitTimeQuadrature)->Unit(benchmark::kMillisecond);

static void LangevinPaths(benchmark::State& state) {
  const LangevinOptions o{.x0 = 0.0, .dt = 1e-3, .t_end = 1.0, .n_paths = static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) {
    auto e = langevin_ensemble(kFig2a, o);
    benchmark::DoNotOptimize(e);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 1000);
}
BENCHMARK(LangevinPaths)->Arg(1000)->Unit(benchmark::kMillisecond);

static void FokkerPlanckUnitTime(benchmark::State& state) {
  const Grid1D g(-3, 3, static_cast<std::size_t>(state.range(0)));
  const auto p0 = stationary_pdf_full_line(kFig2a, g).density;
  const double dt = 0.2 * g.dx() * g.dx() / kFig2a.b;
  for (auto _ : state) {
    auto tr = fp_evolve(kFig2a, p0, 1.0, dt, {.sample_every = 1.0});
    benchmark::DoNotOptimize(tr);
  }
}
BENCHMARK(FokkerPlanckUnitTime)->Arg(301)->Arg(601)->Unit(benchmark::kMillisecond);
