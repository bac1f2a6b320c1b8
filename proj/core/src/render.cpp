#include "levelblend/render.hpp"

#include <fmt/format.h>

namespace levelblend {

Rgb tile_color(char symbol) {
  switch (symbol) {
    case '-': return {236, 236, 236};
    case 'P': return {120, 200, 255};
    case 'X': return {90, 90, 90};
    case 'S': return {170, 110, 60};
    case '#': return {130, 130, 200};
    case '|': return {200, 170, 90};
    case 'v': return {230, 60, 60};
    case '^': return {170, 30, 30};
    case 'e': return {240, 120, 40};
    case 'E': return {200, 80, 160};
    case 'o': return {250, 215, 40};
    case '*': return {60, 200, 90};
    case 'Q': return {220, 180, 60};
    case '!': return {40, 150, 70};
    case '$': return {100, 60, 200};
    case '@': return {20, 20, 20};
    default: return {255, 0, 255};
  }
}

std::string render_ascii(const TileGrid& grid) { return to_text(grid); }

namespace {

constexpr Rgb kGap = {40, 40, 40};

void append_pixel_row(std::string& out, const TileGrid& grid, int row, int scale) {
  for (int c = 0; c < grid.cols(); ++c) {
    const Rgb px = tile_color(grid.at(row, c));
    for (int s = 0; s < scale; ++s) out += fmt::format("{} {} {}\n", px[0], px[1], px[2]);
  }
}

}  // namespace

std::string render_ppm(const TileGrid& grid, int scale) {
  return render_strip_ppm(std::span<const TileGrid>(&grid, 1), scale);
}

std::string render_strip_ppm(std::span<const TileGrid> frames, int scale) {
  if (frames.empty()) throw Error("nothing to render");
  if (scale < 1) throw Error("render scale must be positive");
  const int rows = frames.front().rows(), cols = frames.front().cols();
  for (const auto& f : frames) {
    if (f.rows() != rows || f.cols() != cols) throw Error("strip frames differ in size");
  }
  const int tile_rows = rows * static_cast<int>(frames.size()) + static_cast<int>(frames.size()) - 1;
  std::string out = fmt::format("P3\n{} {}\n255\n", cols * scale, tile_rows * scale);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (i > 0) {
      for (int s = 0; s < scale * cols * scale; ++s) out += fmt::format("{} {} {}\n", kGap[0], kGap[1], kGap[2]);
    }
    for (int r = 0; r < rows; ++r) {
      for (int s = 0; s < scale; ++s) append_pixel_row(out, frames[i], r, scale);
    }
  }
  return out;
}

}  // namespace levelblend
