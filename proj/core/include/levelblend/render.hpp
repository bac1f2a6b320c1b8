#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "levelblend/grid.hpp"

namespace levelblend {

using Rgb = std::array<std::uint8_t, 3>;

/// Flat color of a tile symbol; unknown symbols render magenta.
Rgb tile_color(char symbol);

/// The grid as text rows.
std::string render_ascii(const TileGrid& grid);

/// Plain-text PPM (P3), each tile drawn as a scale x scale block.
std::string render_ppm(const TileGrid& grid, int scale = 8);

/// Frames stacked top to bottom with a one-tile dark gap between them, as one
/// plain PPM. Frames must share a size.
std::string render_strip_ppm(std::span<const TileGrid> frames, int scale = 8);

}  // namespace levelblend
