#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace levelblend {

inline constexpr int kSegmentRows = 15;
inline constexpr int kSegmentCols = 32;
inline constexpr int kSegmentCells = kSegmentRows * kSegmentCols;

/// Base class for every error the toolkit raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point {
  int row = 0;
  int col = 0;
  constexpr bool operator==(const Point&) const = default;
};

/// Rectangular grid of tile symbols, stored row-major.
class TileGrid {
 public:
  TileGrid() = default;
  TileGrid(int rows, int cols, char fill);

  /// Builds a grid from equal-width text rows. Throws on ragged input.
  static TileGrid from_rows(const std::vector<std::string>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return cells_.size(); }

  char at(int row, int col) const { return cells_[index(row, col)]; }
  char& at(int row, int col) { return cells_[index(row, col)]; }
  char at(Point p) const { return at(p.row, p.col); }
  bool contains(int row, int col) const { return row >= 0 && row < rows_ && col >= 0 && col < cols_; }

  std::string_view cells() const { return {cells_.data(), cells_.size()}; }
  std::string row_string(int row) const;

  /// Copy of columns [first, first + width).
  TileGrid window(int first, int width) const;

  /// New grid with `count` rows of `fill` prepended above row 0.
  TileGrid pad_top(int count, char fill) const;

  bool operator==(const TileGrid&) const = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(col);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::string cells_;
};

struct Level {
  std::string game;
  std::string source;  // file name the level came from
  TileGrid grid;
  /// Cells whose raw character was a door symbol of the game.
  std::vector<Point> doors;
};

/// A 15x32 window of a level; the unit of training, generation and evaluation.
struct Segment {
  std::string game;
  TileGrid grid;
  bool annotated = false;
  /// Cells of the agent path that produced the annotation, in traversal order.
  std::vector<Point> path;
  std::string source;
  int offset = 0;

  Segment() : grid(kSegmentRows, kSegmentCols, '-') {}
  Segment(std::string game_id, TileGrid g);

  /// Throws unless the grid is exactly 15x32 and every symbol is legal.
  void validate() const;
};

/// Segment text: 15 lines of 32 symbols, each terminated by '\n'.
std::string to_text(const TileGrid& grid);
TileGrid grid_from_text(std::string_view text);

}  // namespace levelblend
