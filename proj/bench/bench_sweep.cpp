// Serial reference against the OpenMP sweep on a reduced fig2a grid, plus
// the cost of one full point.

#include <benchmark/benchmark.h>

#include "mmsim/entanglement.hpp"
#include "mmsim/sweep.hpp"

using namespace mmsim;

namespace {

const SystemParams& base() {
  static const SystemParams p = SystemParams::table1();
  return p;
}

void BM_point(benchmark::State& state) {
  SystemParams p = base();
  apply_coordinate(p, "Delta1", -0.5);
  apply_coordinate(p, "Delta2", -0.5);
  for (auto _ : state) benchmark::DoNotOptimize(full_report(p));
}
BENCHMARK(BM_point)->Unit(benchmark::kMicrosecond);

void BM_sweep_serial(benchmark::State& state) {
  const auto spec = preset("fig2a").with_resolution(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep_serial(spec, base()));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_sweep_serial)->Arg(41)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_sweep_parallel(benchmark::State& state) {
  const auto spec = preset("fig2a").with_resolution(static_cast<int>(state.range(0)));
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec, base(), workers));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_sweep_parallel)->Args({41, 1})->Args({41, 2})->Args({41, 4})->Args({41, 8})
    ->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
