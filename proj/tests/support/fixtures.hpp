#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "levelblend/grid.hpp"
#include "levelblend/metrics.hpp"
#include "levelblend/physics.hpp"
#include "levelblend/random.hpp"

namespace levelblend::fixture {

/// The repository's data/ directory.
std::filesystem::path data_dir();

/// Physics of the five shipped games, in kGameIds order.
std::vector<JumpPhysics> shipped_physics();

/// Right-facing king-move arcs with random climb, air control and jump rules.
JumpPhysics random_physics(Rng& rng);

/// 15x32 platformer-like grid: ground with pits, platforms, hazards, ladders,
/// walls, pickups and sometimes null rows on top. No path tiles.
TileGrid random_platformer_grid(Rng& rng);

/// A metric fixture with hand-counted cell classes.
struct MetricFixture {
  std::string name;
  Segment segment;
  int occupied = 0;
  int hazards = 0;
  int interesting = 0;
  int path_cells = 0;
  /// Topmost non-null occupied row per column, -1 where the column has none.
  std::vector<int> heights;
};

std::vector<MetricFixture> metric_fixtures();

/// Five independent N(0, 1) components, the first shifted by `shift`.
FeatureVector gaussian_features(Rng& rng, double shift = 0.0);

}  // namespace levelblend::fixture
