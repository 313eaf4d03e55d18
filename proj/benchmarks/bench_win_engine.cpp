#include <benchmark/benchmark.h>

#include "hce/rng.hpp"
#include "hce/win_engine.hpp"

namespace {

hce::HceDataset make_dataset(int n) {
  std::vector<hce::ComponentSpec> specs{
      {"Death", hce::ComponentKind::TimeToEvent, 1, hce::Direction::HigherIsBetter},
      {"Hospitalization", hce::ComponentKind::TimeToEvent, 2, hce::Direction::HigherIsBetter},
      {"Score", hce::ComponentKind::Continuous, 3, hce::Direction::HigherIsBetter}};
  hce::ComponentConfig cfg(std::move(specs), 1095.0);
  hce::Rng rng(42);
  std::vector<hce::SubjectRecord> subjects;
  for (int i = 0; i < 2 * n; ++i) {
    const int cat = 1 + static_cast<int>(rng.below(3));
    const double v = cat == 3 ? rng.normal(0.0, 4.0) : rng.uniform() * 1095.0;
    subjects.push_back({std::to_string(i), i < n ? hce::Arm::Active : hce::Arm::Control, {cat, v}});
  }
  return hce::HceDataset(std::move(cfg), std::move(subjects));
}

void BM_WinCountsBrute(benchmark::State& state) {
  const auto d = make_dataset(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hce::win_counts_brute(d));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WinCountsBrute)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_WinCountsFast(benchmark::State& state) {
  const auto d = make_dataset(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hce::win_counts_fast(d));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WinCountsFast)->RangeMultiplier(4)->Range(64, 65536)->Complexity();

void BM_AnalyzeAnalytic(benchmark::State& state) {
  const auto d = make_dataset(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hce::analyze(d));
}
BENCHMARK(BM_AnalyzeAnalytic)->Arg(1000)->Arg(10000);

void BM_AnalyzeBootstrap(benchmark::State& state) {
  const auto d = make_dataset(1000);
  hce::CiOptions opt;
  opt.method = hce::CiMethod::Bootstrap;
  opt.bootstrap_reps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hce::analyze(d, opt));
}
BENCHMARK(BM_AnalyzeBootstrap)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
