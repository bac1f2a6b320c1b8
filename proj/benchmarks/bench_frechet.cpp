#include <benchmark/benchmark.h>

#include <vector>

#include "levelblend/frechet.hpp"
#include "levelblend/random.hpp"

namespace {

std::vector<levelblend::Point> walk(int n, std::uint64_t seed) {
  levelblend::Rng rng = levelblend::make_rng(seed, "bench-walk");
  std::vector<levelblend::Point> out;
  levelblend::Point p{14, 0};
  for (int i = 0; i < n; ++i) {
    p.col += 1;
    p.row += static_cast<int>(levelblend::uniform_index(rng, 3)) - 1;
    out.push_back(p);
  }
  return out;
}

void BM_DiscreteFrechet(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = walk(n, 1), b = walk(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(levelblend::discrete_frechet(a, b));
  state.SetComplexityN(n);
}
BENCHMARK(BM_DiscreteFrechet)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oNSquared);

}  // namespace
