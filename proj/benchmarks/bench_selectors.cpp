#include <benchmark/benchmark.h>

#include "sensorsel/baselines.hpp"
#include "sensorsel/greg.hpp"
#include "sensorsel/harness.hpp"
#include "sensorsel/linalg.hpp"
#include "sensorsel/rng.hpp"

namespace {

using namespace sensorsel;

SelectionProblem make_problem(std::size_t n, std::size_t m, std::size_t n_y, std::size_t p) {
  RandomStream rng(1234);
  const std::size_t rank = std::min({n, m, std::size_t{20}});
  DataMatrix a(n, rank);
  for (double& v : a.values()) v = rng.normal();
  DataMatrix b(rank, m);
  for (double& v : b.values()) v = rng.normal();
  DataMatrix c(n_y, rank);
  for (double& v : c.values()) v = rng.normal();
  DataMatrix x = multiply(a, b);
  for (double& v : x.values()) v += 0.05 * rng.normal();
  return SelectionProblem{std::move(x), multiply(c, b), 0.01, p};
}

void BM_GregSelect(benchmark::State& state) {
  const auto problem = make_problem(state.range(0), 200, 20, 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(greg_select(problem));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GregSelect)->RangeMultiplier(2)->Range(500, 4000)->Complexity()
    ->Unit(benchmark::kMillisecond);

void BM_NaiveGreedy(benchmark::State& state) {
  const auto problem = make_problem(state.range(0), 100, 10, 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(naive_greedy(problem));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NaiveGreedy)->RangeMultiplier(2)->Range(125, 500)->Complexity()
    ->Unit(benchmark::kMillisecond);

void BM_RegSelect(benchmark::State& state) {
  const auto problem = make_problem(state.range(0), 200, 1, 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reg_select(problem.x, 50));
  }
}
BENCHMARK(BM_RegSelect)->RangeMultiplier(2)->Range(500, 2000)->Unit(benchmark::kMillisecond);

void BM_SompSelect(benchmark::State& state) {
  const auto problem = make_problem(state.range(0), 200, 20, 30);
  for (auto _ : state) {
    benchmark::DoNotOptimize(somp_select(problem, 30));
  }
}
BENCHMARK(BM_SompSelect)->RangeMultiplier(2)->Range(500, 2000)->Unit(benchmark::kMillisecond);

void BM_ThinSvd(benchmark::State& state) {
  RandomStream rng(99);
  DataMatrix a(state.range(0), 160);
  for (double& v : a.values()) v = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(thin_svd(a));
  }
}
BENCHMARK(BM_ThinSvd)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
