#include "levelblend/grid.hpp"

#include <sstream>

#include <fmt/format.h>

#include "levelblend/tiles.hpp"

namespace levelblend {

TileGrid::TileGrid(int rows, int cols, char fill) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw Error("negative grid dimensions");
  cells_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
}

TileGrid TileGrid::from_rows(const std::vector<std::string>& rows) {
  if (rows.empty()) return {};
  const std::size_t width = rows.front().size();
  TileGrid grid(static_cast<int>(rows.size()), static_cast<int>(width), '-');
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw Error(fmt::format("row {} has width {}, expected {}", r, rows[r].size(), width));
    }
    grid.cells_.replace(r * width, width, rows[r]);
  }
  return grid;
}

std::string TileGrid::row_string(int row) const {
  return cells_.substr(index(row, 0), static_cast<std::size_t>(cols_));
}

TileGrid TileGrid::window(int first, int width) const {
  if (first < 0 || width < 0 || first + width > cols_) {
    throw Error(fmt::format("window [{}, {}) outside grid of width {}", first, first + width, cols_));
  }
  TileGrid out(rows_, width, '-');
  for (int r = 0; r < rows_; ++r) {
    out.cells_.replace(out.index(r, 0), static_cast<std::size_t>(width), cells_, index(r, first),
                       static_cast<std::size_t>(width));
  }
  return out;
}

TileGrid TileGrid::pad_top(int count, char fill) const {
  TileGrid out(rows_ + count, cols_, fill);
  out.cells_.replace(out.index(count, 0), cells_.size(), cells_);
  return out;
}

Segment::Segment(std::string game_id, TileGrid g) : game(std::move(game_id)), grid(std::move(g)) {}

void Segment::validate() const {
  if (grid.rows() != kSegmentRows || grid.cols() != kSegmentCols) {
    throw Error(fmt::format("segment must be {}x{}, got {}x{}", kSegmentRows, kSegmentCols, grid.rows(),
                            grid.cols()));
  }
  for (int r = 0; r < grid.rows(); ++r) {
    for (int c = 0; c < grid.cols(); ++c) {
      if (!tiles::is_symbol(grid.at(r, c))) {
        throw Error(fmt::format("illegal symbol '{}' at row {}, column {}", grid.at(r, c), r, c));
      }
    }
  }
}

std::string to_text(const TileGrid& grid) {
  std::string out;
  out.reserve(grid.size() + static_cast<std::size_t>(grid.rows()));
  for (int r = 0; r < grid.rows(); ++r) {
    out += grid.row_string(r);
    out += '\n';
  }
  return out;
}

TileGrid grid_from_text(std::string_view text) {
  std::vector<std::string> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    if (!line.empty()) rows.push_back(line);
  }
  return TileGrid::from_rows(rows);
}

}  // namespace levelblend
