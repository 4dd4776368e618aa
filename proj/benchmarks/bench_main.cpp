#include <benchmark/benchmark.h>

#include <random>

#include "rdag/engine.hpp"
#include "rdag/resilience.hpp"
#include "rdag/scenario.hpp"

namespace {

using namespace rdag;

const char* const kSec5 = RDAG_SOURCE_DIR "/scenarios/paper_sec5_continuous.json";

void BM_FilterNeighbors(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10, 10);
  std::vector<Measurement> m;
  for (int j = 0; j < n; ++j) m.push_back({n, j, make_vec({u(rng), u(rng)})});
  const int F = (n - 1) / 3;
  for (auto _ : state) benchmark::DoNotOptimize(filter_neighbors(m, F));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_FilterNeighbors)->Arg(4)->Arg(16)->Arg(64)->Arg(256);

void BM_Step(benchmark::State& state, Mode mode) {
  const auto sc = load_scenario(kSec5);
  const auto base = build_world(sc);
  auto params = sc.params;
  for (auto _ : state) {
    state.PauseTiming();
    auto w = base;
    std::vector<FilterState> filters(static_cast<std::size_t>(w.size()));
    state.ResumeTiming();
    for (int k = 0; k < 100; ++k) {
      benchmark::DoNotOptimize(mode == Mode::kContinuous ? step_continuous(w, filters, params)
                                                          : step_discrete(w, filters, params));
    }
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK_CAPTURE(BM_Step, continuous, Mode::kContinuous)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_Step, discrete, Mode::kDiscrete)->Unit(benchmark::kMicrosecond);

void BM_Sec5Run(benchmark::State& state) {
  const auto sc = load_scenario(kSec5);
  for (auto _ : state) benchmark::DoNotOptimize(run(sc).report.steps);
}
BENCHMARK(BM_Sec5Run)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
