#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "levelblend/pathing.hpp"
#include "levelblend/tiles.hpp"
#include "oracles.hpp"

namespace levelblend {
namespace {

Segment flat() {
  Segment s;
  s.game = "SMB";
  for (int c = 0; c < kSegmentCols; ++c) {
    s.grid.at(13, c) = 'X';
    s.grid.at(14, c) = 'X';
  }
  return s;
}

JumpPhysics smb() { return load_physics(fixture::data_dir() / "physics", "SMB"); }

TEST(Physics, ShippedTablesValidate) {
  for (const auto& p : fixture::shipped_physics()) {
    EXPECT_NO_THROW(p.validate()) << p.game_id;
    EXPECT_GT(p.max_jump_height(), 0) << p.game_id;
  }
  EXPECT_EQ(smb().max_jump_height(), 4);
}

TEST(Physics, NonKingMoveArcIsRejected) {
  JumpPhysics p;
  p.arcs = {{{0, -1}, {2, -1}}};
  EXPECT_THROW(p.validate(), Error);
}

TEST(Pathing, FlatGroundCostsOneMovePerColumn) {
  const auto path = find_path(flat(), smb());
  ASSERT_TRUE(path.has_value());
  EXPECT_EQ(path->cost(), kSegmentCols - 1);
  EXPECT_EQ(path->points.front().col, 0);
  EXPECT_EQ(path->points.back().col, kSegmentCols - 1);
  EXPECT_FALSE(check_path(flat().grid, smb(), path->points).has_value());
}

TEST(Pathing, WallAboveJumpHeightBlocks) {
  Segment s = flat();
  for (int r = 6; r <= 12; ++r) s.grid.at(r, 10) = 'X';
  EXPECT_FALSE(find_path(s, smb()).has_value());
  Segment low = flat();
  for (int r = 10; r <= 12; ++r) low.grid.at(r, 10) = 'X';
  const auto path = find_path(low, smb());
  ASSERT_TRUE(path.has_value());
  EXPECT_GT(path->cost(), kSegmentCols - 1);
}

TEST(Pathing, HazardFloorIsNotStandable) {
  Segment s = flat();
  for (int c = 0; c < kSegmentCols; ++c) s.grid.at(13, c) = '^';
  EXPECT_FALSE(find_path(s, smb()).has_value());
}

TEST(Pathing, CheckPathExplainsIllegalSteps) {
  const auto g = flat().grid;
  const std::vector<Point> teleport = {{12, 0}, {12, 5}};
  EXPECT_TRUE(check_path(g, smb(), teleport).has_value());
  const std::vector<Point> late_start = {{12, 1}, {12, 2}};
  EXPECT_TRUE(check_path(g, smb(), late_start).has_value());
  std::vector<Point> short_walk;
  for (int c = 0; c < 10; ++c) short_walk.push_back({12, c});
  EXPECT_TRUE(check_path(g, smb(), short_walk).has_value());
  std::vector<Point> into_ground;
  for (int c = 0; c < kSegmentCols; ++c) into_ground.push_back({c < 3 ? 12 : 13, c});
  EXPECT_TRUE(check_path(g, smb(), into_ground).has_value());
}

TEST(PathingProperty, OptimalCostMatchesBreadthFirstOracle) {
  Rng rng = make_rng(17, "pathing-property");
  const auto shipped = fixture::shipped_physics();
  int solvable = 0;
  for (int i = 0; i < 120; ++i) {
    const TileGrid g = fixture::random_platformer_grid(rng);
    const JumpPhysics p = i % 2 == 0 ? shipped[static_cast<std::size_t>(i / 2) % shipped.size()]
                                     : fixture::random_physics(rng);
    const auto path = find_path(g, p);
    const auto cost = oracle::bfs_path_cost(g, p);
    ASSERT_EQ(path.has_value(), cost.has_value()) << "grid " << i << "\n" << to_text(g);
    if (!path) continue;
    ++solvable;
    EXPECT_EQ(path->cost(), *cost) << "grid " << i;
    EXPECT_FALSE(check_path(g, p, path->points).has_value()) << "grid " << i;
  }
  EXPECT_GT(solvable, 20);
}

TEST(Pathing, AnnotatePaintsBackgroundOnlyAndStripRestores) {
  Segment s = flat();
  s.grid.at(12, 5) = 'o';
  const Segment a = annotate_segment(s, smb());
  EXPECT_TRUE(a.annotated);
  EXPECT_FALSE(a.path.empty());
  for (const auto& p : a.path) {
    const char before = s.grid.at(p);
    EXPECT_EQ(a.grid.at(p), before == '-' ? 'P' : before);
  }
  EXPECT_EQ(a.grid.at(12, 5), 'o');
  EXPECT_EQ(strip_path(a).grid, s.grid);
  Segment blocked = flat();
  for (int r = 0; r <= 12; ++r) blocked.grid.at(r, 10) = 'X';
  EXPECT_THROW(annotate_segment(blocked, smb()), PathFailure);
}

TEST(Pathing, ExtractGeneratedPathIsColumnMajor) {
  Segment s;
  s.grid.at(5, 3) = 'P';
  s.grid.at(2, 3) = 'P';
  s.grid.at(9, 1) = 'P';
  const auto p = extract_generated_path(s);
  EXPECT_EQ(p, (std::vector<Point>{{9, 1}, {2, 3}, {5, 3}}));
}

TEST(Pathing, DumpRoundTrip) {
  const std::vector<Point> p = {{12, 0}, {11, 1}, {10, 2}};
  EXPECT_EQ(format_path_dump(p), "12,0\n11,1\n10,2\n");
  EXPECT_EQ(parse_path_dump(format_path_dump(p)), p);
  EXPECT_THROW(parse_path_dump("1;2\n"), Error);
}

TEST(Pathing, FailureRateIsAPercentage) {
  Segment blocked = flat();
  for (int r = 0; r <= 12; ++r) blocked.grid.at(r, 10) = 'X';
  const std::vector<Segment> segs = {flat(), blocked, flat(), blocked};
  EXPECT_DOUBLE_EQ(agent_failure_rate(segs, smb()), 50.0);
}

}  // namespace
}  // namespace levelblend
