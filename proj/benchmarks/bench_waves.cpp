#include <benchmark/benchmark.h>

#include <vector>

#include "popwave/coupled_system.hpp"
#include "popwave/pde_sim.hpp"
#include "popwave/wave_builder.hpp"

using namespace popwave;

static void CollectSigmaQuadratic(benchmark::State& state) {
  const auto k = build_quadratic_kink({.b = 0.1, .c = 1, .D_dag = 0.5, .alpha1_dag = 0.5, .alpha2_dag = -1});
  for (auto _ : state) {
    auto s = collect_sigma(k.solution.series(), k.solution.kernel(), k.solution.equation());
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(CollectSigmaQuadratic);

static void KinkEvaluate(benchmark::State& state) {
  const auto k = build_kink_between({.A1 = 1.5, .A2 = 0.5});
  double xi = -30;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k.solution(xi));
    xi = xi > 30 ? -30 : xi + 0.01;
  }
}
BENCHMARK(KinkEvaluate);

static void NewtonCoupled(benchmark::State& state) {
  const auto s = closed_form(1.0, 2.0, 0.5, 1.0, 1.0);
  CoupledUnknowns guess = s.unknowns;
  for (std::size_t idx : NewtonOptions{}.free) guess[idx] += 0.01;
  for (auto _ : state) {
    auto r = newton_solve(s.params, guess);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(NewtonCoupled);

// One unit of simulated time for the Fig. 1 dashed kink; range = grid nodes.
static void PdeKinkUnitTime(benchmark::State& state) {
  const auto k = build_kink_between({.A1 = 1.0, .A2 = 0.0});
  const auto& eq = k.solution.equation();
  Eigen::MatrixXd D(1, 1);
  D(0, 0) = eq.physical_D();
  const PdeModel model{D, MultiPolynomial::from_scalar(eq.physical_alpha()), std::nullopt};
  const Grid1D g(-20, 20, static_cast<std::size_t>(state.range(0)));
  std::vector<double> u(g.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = k.solution(g.x(i));
  const double dt = 0.9 * max_stable_dt(model, g);
  for (auto _ : state) {
    auto f = integrate(model, Field1D(g, {u}), 1.0, dt, {BoundaryCondition::Kind::fixed_value, {}, {}});
    benchmark::DoNotOptimize(f);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(PdeKinkUnitTime)->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMillisecond)->Complexity();
