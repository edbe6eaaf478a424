#include <benchmark/benchmark.h>

#include "cutdg/problems.hpp"
#include "cutdg/solver.hpp"
#include "cutdg/studies.hpp"

using namespace cutdg;

static void BM_Discretize(benchmark::State& state) {
  const auto mesh = level_mesh(static_cast<int>(state.range(0)));
  const auto ls = circle_levelset(Vec2::Zero(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(discretize(mesh, ls));
}
BENCHMARK(BM_Discretize)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

static void BM_AssembleSystem(benchmark::State& state) {
  const auto problem = build_circle_problem();
  const auto d = discretize(level_mesh(static_cast<int>(state.range(0))), problem.geometry);
  const auto load = problem.load();
  for (auto _ : state) benchmark::DoNotOptimize(assemble_system(d, load, {}));
  state.counters["dofs"] = d.dofs.size();
}
BENCHMARK(BM_AssembleSystem)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

static void BM_SolveCG(benchmark::State& state) {
  const auto problem = build_circle_problem();
  const auto d = discretize(level_mesh(static_cast<int>(state.range(0))), problem.geometry);
  const auto sys = assemble_system(d, problem.load(), {});
  long iterations = 0;
  for (auto _ : state) iterations = solve(sys).iterations;
  state.counters["iterations"] = static_cast<double>(iterations);
}
BENCHMARK(BM_SolveCG)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

static void BM_ConditionNumber(benchmark::State& state) {
  const auto problem = build_circle_problem();
  const auto d = discretize(level_mesh(static_cast<int>(state.range(0))), problem.geometry);
  const auto a = rescaled_matrix(assemble_system(d, problem.load(), {}));
  for (auto _ : state) benchmark::DoNotOptimize(condition_number(a).kappa);
}
BENCHMARK(BM_ConditionNumber)->DenseRange(0, 1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
