#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "levelblend/grid.hpp"
#include "levelblend/io.hpp"
#include "levelblend/random.hpp"
#include "levelblend/tiles.hpp"

namespace levelblend {
namespace {

TEST(Tiles, AlphabetIsSixteenDistinctSymbolsWithBackgroundFirst) {
  std::set<char> seen(tiles::kAlphabet.begin(), tiles::kAlphabet.end());
  EXPECT_EQ(seen.size(), 16u);
  EXPECT_EQ(tiles::kAlphabet[0], '-');
  for (int i = 0; i < tiles::kSymbolCount; ++i) {
    EXPECT_EQ(tiles::index_of(tiles::symbol_at(i)), i);
    EXPECT_TRUE(tiles::is_symbol(tiles::symbol_at(i)));
  }
  EXPECT_FALSE(tiles::index_of('?').has_value());
  EXPECT_THROW(tiles::symbol_at(16), Error);
  EXPECT_THROW(tiles::symbol_at(-1), Error);
}

TEST(Tiles, AffordanceClasses) {
  for (char c : std::string("v^eE@")) EXPECT_TRUE(tiles::is_hazard(c)) << c;
  for (char c : std::string("-XS#|o*Q!$P")) EXPECT_FALSE(tiles::is_hazard(c)) << c;
  for (char c : std::string("o*Q!$")) EXPECT_TRUE(tiles::is_interesting(c)) << c;
  for (char c : std::string("-XS#|v^eE@P")) EXPECT_FALSE(tiles::is_interesting(c)) << c;
  EXPECT_FALSE(tiles::is_occupied('-'));
  EXPECT_FALSE(tiles::is_occupied('P'));
  for (char c : std::string("XS#|v^eEo*Q!$@")) EXPECT_TRUE(tiles::is_occupied(c)) << c;
  EXPECT_TRUE(tiles::affordances('|').has(Affordance::kClimbable));
  EXPECT_TRUE(tiles::affordances('|').has(Affordance::kPassable));
  EXPECT_TRUE(tiles::affordances('@').has(Affordance::kNull));
  EXPECT_TRUE(tiles::affordances('-').empty());
}

TEST(Grid, FromRowsRejectsRaggedInput) {
  EXPECT_THROW(TileGrid::from_rows({"--", "-"}), Error);
  const auto g = TileGrid::from_rows({"-X", "S-"});
  EXPECT_EQ(g.rows(), 2);
  EXPECT_EQ(g.cols(), 2);
  EXPECT_EQ(g.at(1, 0), 'S');
  EXPECT_EQ(g.row_string(0), "-X");
}

TEST(Grid, WindowAndPadTop) {
  const auto g = TileGrid::from_rows({"abcd", "efgh"});
  const auto w = g.window(1, 2);
  EXPECT_EQ(w, TileGrid::from_rows({"bc", "fg"}));
  const auto p = g.pad_top(2, '@');
  EXPECT_EQ(p.rows(), 4);
  EXPECT_EQ(p.row_string(0), "@@@@");
  EXPECT_EQ(p.row_string(3), "efgh");
}

TEST(Grid, TextRoundTrip) {
  Rng rng = make_rng(3, "grid-text");
  TileGrid g(kSegmentRows, kSegmentCols, '-');
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c) g.at(r, c) = tiles::symbol_at(static_cast<int>(uniform_index(rng, 16)));
  const std::string text = to_text(g);
  EXPECT_EQ(text.size(), static_cast<std::size_t>(kSegmentRows * (kSegmentCols + 1)));
  EXPECT_EQ(grid_from_text(text), g);
}

TEST(Segment, ValidateChecksShapeAndSymbols) {
  Segment s;
  EXPECT_NO_THROW(s.validate());
  s.grid.at(3, 3) = '?';
  EXPECT_THROW(s.validate(), Error);
  Segment small("SMB", TileGrid(14, 32, '-'));
  EXPECT_THROW(small.validate(), Error);
}

TEST(Random, DerivedSeedsAreStableAndLabelSensitive) {
  EXPECT_EQ(derive_seed(1, "a", 2), derive_seed(1, "a", 2));
  EXPECT_NE(derive_seed(1, "a", 2), derive_seed(1, "a", 3));
  EXPECT_NE(derive_seed(1, "a", 2), derive_seed(1, "b", 2));
  EXPECT_NE(derive_seed(1, "a", 2), derive_seed(2, "a", 2));
}

TEST(Random, UniformIndexStaysInRangeAndCoversIt) {
  Rng rng = make_rng(9, "uniform-index");
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto k = uniform_index(rng, 7);
    ASSERT_LT(k, 7u);
    ++hits[k];
  }
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(Random, StandardNormalMoments) {
  Rng rng = make_rng(9, "normal");
  double s = 0, ss = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = standard_normal(rng);
    s += x;
    ss += x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 0.03);
  EXPECT_NEAR(ss / n, 1.0, 0.05);
}

TEST(Io, WriteCreatesDirectoriesAndReadsBack) {
  const auto dir = std::filesystem::temp_directory_path() / "levelblend-io-test";
  std::filesystem::remove_all(dir);
  write_file(dir / "a" / "b.txt", "hello\n");
  EXPECT_EQ(read_file(dir / "a" / "b.txt"), "hello\n");
  EXPECT_THROW(read_file(dir / "missing.txt"), Error);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace levelblend
