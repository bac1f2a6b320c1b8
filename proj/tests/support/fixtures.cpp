#include "fixtures.hpp"

#include <algorithm>

#include "levelblend/corpus.hpp"

#ifndef LEVELBLEND_TEST_DATA_DIR
#error "LEVELBLEND_TEST_DATA_DIR must point at the repository's data directory"
#endif

namespace levelblend::fixture {
namespace {

int pick(Rng& rng, int lo, int hi) { return lo + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(hi - lo + 1))); }

bool chance(Rng& rng, double p) { return uniform01(rng) < p; }

Segment ground_segment() {
  Segment s;
  for (int c = 0; c < kSegmentCols; ++c) {
    s.grid.at(13, c) = 'X';
    s.grid.at(14, c) = 'X';
  }
  s.annotated = true;
  return s;
}

}  // namespace

std::filesystem::path data_dir() { return LEVELBLEND_TEST_DATA_DIR; }

std::vector<JumpPhysics> shipped_physics() {
  std::vector<JumpPhysics> out;
  for (const auto& g : kGameIds) out.push_back(load_physics(data_dir() / "physics", g));
  return out;
}

JumpPhysics random_physics(Rng& rng) {
  JumpPhysics p;
  p.game_id = "random";
  p.can_climb = chance(rng, 0.5);
  p.air_control = chance(rng, 0.5);
  p.variable_jump = true;
  const int arcs = pick(rng, 1, 3);
  for (int a = 0; a < arcs; ++a) {
    JumpArc arc;
    ArcOffset at{pick(rng, 0, 1), -1};
    arc.push_back(at);
    const int len = pick(rng, 1, 6);
    for (int i = 0; i < len; ++i) {
      at.dx += pick(rng, 0, 1);
      at.dy += pick(rng, -1, 1);
      if (arc.back() == at) at.dy -= 1;
      arc.push_back(at);
    }
    p.arcs.push_back(std::move(arc));
  }
  p.validate();
  return p;
}

TileGrid random_platformer_grid(Rng& rng) {
  TileGrid g(kSegmentRows, kSegmentCols, '-');
  for (int c = 0; c < kSegmentCols; ++c) {
    g.at(13, c) = 'X';
    g.at(14, c) = 'X';
  }
  for (int c = 2; c < kSegmentCols - 3; ++c) {
    if (chance(rng, 0.1)) {
      const int w = pick(rng, 1, 3);
      for (int k = 0; k < w; ++k) {
        g.at(13, c + k) = '-';
        g.at(14, c + k) = '-';
      }
      c += w + 2;
    }
  }
  const char solids[] = {'X', 'S', '#', 'Q', '!'};
  for (int n = pick(rng, 2, 5); n > 0; --n) {
    const int r = pick(rng, 5, 11), c = pick(rng, 0, kSegmentCols - 3), len = pick(rng, 2, 6);
    const char s = solids[uniform_index(rng, 5)];
    for (int k = 0; k < len && c + k < kSegmentCols; ++k) g.at(r, c + k) = s;
    if (chance(rng, 0.3)) {
      for (int rr = r; rr <= 12; ++rr) g.at(rr, std::max(0, c - 1)) = '|';
    }
  }
  for (int n = pick(rng, 0, 2); n > 0; --n) {
    const int c = pick(rng, 3, kSegmentCols - 4), h = pick(rng, 1, 4);
    for (int k = 0; k < h; ++k) g.at(12 - k, c) = 'X';
  }
  const char hazards[] = {'^', 'e', 'E', 'v'};
  for (int n = pick(rng, 0, 4); n > 0; --n) {
    const int c = pick(rng, 1, kSegmentCols - 2);
    g.at(12, c) = hazards[uniform_index(rng, 4)];
  }
  const char pickups[] = {'o', '*', '$'};
  for (int n = pick(rng, 0, 4); n > 0; --n) g.at(pick(rng, 3, 11), pick(rng, 0, kSegmentCols - 1)) = pickups[uniform_index(rng, 3)];
  for (int r = pick(rng, 0, 2) - 1; r >= 0; --r) {
    for (int c = 0; c < kSegmentCols; ++c) g.at(r, c) = '@';
  }
  return g;
}

std::vector<MetricFixture> metric_fixtures() {
  std::vector<MetricFixture> out;
  const std::vector<int> flat(kSegmentCols, 13);

  {
    MetricFixture f{"empty", Segment(), 0, 0, 0, 0, std::vector<int>(kSegmentCols, -1)};
    f.segment.annotated = true;
    out.push_back(f);
  }
  {
    MetricFixture f{"flat ground", ground_segment(), 64, 0, 0, 32, flat};
    for (int c = 0; c < kSegmentCols; ++c) f.segment.path.push_back({12, c});
    out.push_back(f);
  }
  {
    // Painted and recorded path cover the same 32 cells.
    MetricFixture f{"painted path", ground_segment(), 64, 0, 0, 32, flat};
    for (int c = 0; c < kSegmentCols; ++c) {
      f.segment.grid.at(12, c) = 'P';
      f.segment.path.push_back({12, c});
    }
    out.push_back(f);
  }
  {
    // P on columns 0-15, recorded path on 10-31 plus one airborne cell.
    MetricFixture f{"partial path", ground_segment(), 64, 0, 0, 33, flat};
    for (int c = 0; c < 16; ++c) f.segment.grid.at(12, c) = 'P';
    for (int c = 10; c < kSegmentCols; ++c) f.segment.path.push_back({12, c});
    f.segment.path.push_back({11, 5});
    out.push_back(f);
  }
  {
    MetricFixture f{"spikes", ground_segment(), 69, 5, 0, 0, flat};
    for (int c = 10; c <= 14; ++c) {
      f.segment.grid.at(12, c) = '^';
      f.heights[static_cast<std::size_t>(c)] = 12;
    }
    out.push_back(f);
  }
  {
    MetricFixture f{"treasure", ground_segment(), 75, 0, 11, 0, flat};
    auto& g = f.segment.grid;
    for (int c : {3, 4, 5}) g.at(8, c) = 'o', f.heights[static_cast<std::size_t>(c)] = 8;
    for (int c : {20, 21}) g.at(7, c) = '*', f.heights[static_cast<std::size_t>(c)] = 7;
    g.at(12, 31) = '$', f.heights[31] = 12;
    for (int c = 10; c <= 13; ++c) g.at(9, c) = 'Q', f.heights[static_cast<std::size_t>(c)] = 9;
    g.at(9, 25) = '!', f.heights[25] = 9;
    out.push_back(f);
  }
  {
    // Null rows count as occupied hazards but never as terrain height.
    MetricFixture f{"null padding", ground_segment(), 160, 96, 0, 0, flat};
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < kSegmentCols; ++c) f.segment.grid.at(r, c) = '@';
    out.push_back(f);
  }
  {
    // Column c rises to row 14 - c / 4.
    MetricFixture f{"staircase", Segment(), 144, 0, 0, 0, {}};
    f.segment.annotated = true;
    for (int c = 0; c < kSegmentCols; ++c) {
      const int top = 14 - c / 4;
      for (int r = top; r < kSegmentRows; ++r) f.segment.grid.at(r, c) = 'X';
      f.heights.push_back(top);
    }
    out.push_back(f);
  }
  {
    MetricFixture f{"alternating", Segment(), 64, 0, 0, 0, {}};
    f.segment.annotated = true;
    for (int c = 0; c < kSegmentCols; ++c) {
      const int top = c % 2 == 0 ? 12 : 14;
      for (int r = top; r < kSegmentRows; ++r) f.segment.grid.at(r, c) = 'X';
      f.heights.push_back(top);
    }
    out.push_back(f);
  }
  {
    MetricFixture f{"hazard mix", ground_segment(), 77, 4, 0, 5, flat};
    auto& g = f.segment.grid;
    g.at(5, 5) = 'v', f.heights[5] = 5;
    g.at(12, 7) = 'e', f.heights[7] = 12;
    g.at(12, 8) = 'E', f.heights[8] = 12;
    g.at(13, 20) = '^';
    for (int r = 8; r <= 12; ++r) g.at(r, 16) = '|';
    f.heights[16] = 8;
    for (int c = 25; c <= 27; ++c) g.at(10, c) = '#', f.heights[static_cast<std::size_t>(c)] = 10;
    for (int c = 0; c <= 1; ++c) g.at(6, c) = 'S', f.heights[static_cast<std::size_t>(c)] = 6;
    for (int c = 0; c < 5; ++c) f.segment.path.push_back({12, c});
    out.push_back(f);
  }
  return out;
}

FeatureVector gaussian_features(Rng& rng, double shift) {
  FeatureVector f;
  f.density = standard_normal(rng) + shift;
  f.nonlinearity = standard_normal(rng);
  f.leniency = standard_normal(rng);
  f.interestingness = standard_normal(rng);
  f.path_proportion = standard_normal(rng);
  return f;
}

}  // namespace levelblend::fixture
