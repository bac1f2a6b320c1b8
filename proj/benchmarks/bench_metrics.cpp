#include <benchmark/benchmark.h>

#include <vector>

#include "levelblend/metrics.hpp"
#include "levelblend/random.hpp"

namespace {

std::vector<levelblend::FeatureVector> sample(int n, std::uint64_t seed) {
  levelblend::Rng rng = levelblend::make_rng(seed, "bench-features");
  std::vector<levelblend::FeatureVector> out(static_cast<std::size_t>(n));
  for (auto& f : out) {
    f.density = levelblend::standard_normal(rng);
    f.nonlinearity = levelblend::standard_normal(rng);
    f.leniency = levelblend::standard_normal(rng);
    f.interestingness = levelblend::standard_normal(rng);
    f.path_proportion = levelblend::standard_normal(rng);
  }
  return out;
}

void BM_EDistance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = sample(n, 1), b = sample(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(levelblend::e_distance(a, b));
  state.SetComplexityN(n);
}
BENCHMARK(BM_EDistance)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oNSquared);

void BM_PermutationTest(benchmark::State& state) {
  const auto a = sample(200, 3), b = sample(200, 4);
  for (auto _ : state) benchmark::DoNotOptimize(levelblend::permutation_test(a, b, 100, 7));
}
BENCHMARK(BM_PermutationTest)->Unit(benchmark::kMillisecond);

}  // namespace
