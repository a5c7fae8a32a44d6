#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "hypwave/evolve.hpp"
#include "hypwave/model.hpp"
#include "hypwave/morawetz.hpp"

using namespace hypwave;

namespace {

struct AccelerationFixture {
  explicit AccelerationFixture(int n)
      : problem(Equation::perturbed2d, hyperbolic_target(), 0.3, RadialGrid(20.0, n)), f(problem.grid().size()),
        out(problem.grid().size()) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double r = problem.grid().r(i);
      f[i] = 0.1 * r * r * std::exp(-(r - 2.0) * (r - 2.0));
    }
    f.back() = 0.0;
  }
  EvolutionProblem problem;
  std::vector<double> f, out;
};

void BM_acceleration_serial(benchmark::State& state) {
  AccelerationFixture fx(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    kernels::acceleration_serial(fx.problem, fx.f, fx.out);
    benchmark::DoNotOptimize(fx.out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_acceleration_parallel(benchmark::State& state) {
  AccelerationFixture fx(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    kernels::acceleration_parallel(fx.problem, fx.f, fx.out);
    benchmark::DoNotOptimize(fx.out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void scan(benchmark::State& state, bool parallel) {
  morawetz::ScanSettings settings;
  settings.parallel = parallel;
  const morawetz::LambdaEnclosure enclosure = morawetz::compute_Lambda(1e-8);
  for (auto _ : state) {
    auto recs = morawetz::pointwise_inequalities_check(0.5, settings, enclosure);
    benchmark::DoNotOptimize(recs.data());
  }
}

void BM_scan_serial(benchmark::State& state) { scan(state, false); }
void BM_scan_parallel(benchmark::State& state) { scan(state, true); }

}  // namespace

BENCHMARK(BM_acceleration_serial)->Arg(4000)->Arg(40000)->Arg(400000);
BENCHMARK(BM_acceleration_parallel)->Arg(4000)->Arg(40000)->Arg(400000);
BENCHMARK(BM_scan_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
