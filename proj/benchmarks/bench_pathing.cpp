#include <benchmark/benchmark.h>

#include "levelblend/pathing.hpp"
#include "levelblend/physics.hpp"
#include "levelblend/random.hpp"

namespace {

levelblend::Segment terrain(std::uint64_t seed) {
  levelblend::Rng rng = levelblend::make_rng(seed, "bench-terrain");
  levelblend::Segment s;
  int h = 2;
  for (int c = 0; c < levelblend::kSegmentCols; ++c) {
    if (c > 1 && levelblend::uniform_index(rng, 4) == 0) h = 1 + static_cast<int>(levelblend::uniform_index(rng, 4));
    for (int r = levelblend::kSegmentRows - h; r < levelblend::kSegmentRows; ++r) s.grid.at(r, c) = 'X';
  }
  return s;
}

void BM_FindPath(benchmark::State& state) {
  const auto physics = levelblend::load_physics(std::filesystem::path(LEVELBLEND_BENCH_DATA_DIR) / "physics", "SMB");
  const auto s = terrain(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(levelblend::find_path(s, physics));
}
BENCHMARK(BM_FindPath)->Arg(1)->Arg(2)->Arg(3);

}  // namespace
