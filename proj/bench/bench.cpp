// Serial reference vs OpenMP kernels. Run with --benchmark_filter to narrow.

#include <benchmark/benchmark.h>

#include <map>

#include "geoforest/forest.hpp"
#include "geoforest/mixture.hpp"
#include "geoforest/split.hpp"

using namespace geoforest;

namespace {

const Dataset& data(std::size_t n) {
  static std::map<std::size_t, Dataset> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, sample_gaussian_mixture({5, 4, 1.0, 1.0, 1}, n)).first;
  return it->second;
}

ForestConfig forest_config() {
  ForestConfig fc;
  fc.n_trees = 12;
  fc.tree.max_depth = 6;
  return fc;
}

void BM_ForestFitSerial(benchmark::State& state) {
  const Dataset& d = data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fit_forest_reference(d, forest_config()));
  state.SetComplexityN(state.range(0));
}

void BM_ForestFitParallel(benchmark::State& state) {
  const Dataset& d = data(static_cast<std::size_t>(state.range(0)));
  const int jobs = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(fit_forest(d, forest_config(), jobs));
  state.SetComplexityN(state.range(0));
}

void BM_ForestPredict(benchmark::State& state) {
  const Dataset& d = data(4000);
  static const ForestModel model = fit_forest(d, forest_config(), 0);
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(model.predict_proba(d.points, Strictness::lenient, jobs));
}

void BM_BestSplitSweep(benchmark::State& state) {
  const Dataset& d = data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(best_split(d, TreeConfig{}));
  state.SetComplexityN(state.range(0));
}

void BM_BestSplitReference(benchmark::State& state) {
  const Dataset& d = data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(best_split_reference(d, TreeConfig{}));
  state.SetComplexityN(state.range(0));
}

void BM_MixtureSample(benchmark::State& state) {
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_gaussian_mixture({5, 8, 1.0, 1.0, 2}, 50000, jobs));
}

}  // namespace

BENCHMARK(BM_ForestFitSerial)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForestFitParallel)->ArgsProduct({{1000, 4000}, {1, 2, 4, 0}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForestPredict)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BestSplitSweep)->RangeMultiplier(4)->Range(64, 4096)->Complexity();
BENCHMARK(BM_BestSplitReference)->RangeMultiplier(4)->Range(64, 1024)->Complexity();
BENCHMARK(BM_MixtureSample)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
