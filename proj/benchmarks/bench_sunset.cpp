#include <benchmark/benchmark.h>

#include "hce/design.hpp"

namespace {

void BM_SunsetGridClosedForm(benchmark::State& state) {
  hce::design::GridOptions opt;
  opt.hr_points = opt.delta_points = static_cast<int>(state.range(0));
  opt.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(hce::design::sunset_grid(opt, {}));
}
BENCHMARK(BM_SunsetGridClosedForm)->Arg(60)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SunsetCellMonteCarlo(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(hce::design::sunset_cell_mc(0.8, 0.5, {}, 500, static_cast<int>(state.range(0)), 1));
  }
}
BENCHMARK(BM_SunsetCellMonteCarlo)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SunsetGridMonteCarlo(benchmark::State& state) {
  hce::design::GridOptions opt;
  opt.hr_points = opt.delta_points = 12;
  opt.method = hce::design::GridMethod::MonteCarlo;
  opt.mc_reps = 20;
  for (auto _ : state) benchmark::DoNotOptimize(hce::design::sunset_grid(opt, {}));
}
BENCHMARK(BM_SunsetGridMonteCarlo)->Unit(benchmark::kMillisecond);

}  // namespace
