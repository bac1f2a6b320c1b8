#pragma once

#include <span>

#include "levelblend/grid.hpp"

namespace levelblend {

/// Discrete Frechet distance between two point sequences (Eiter and Mannila),
/// with Euclidean distance on (row, col). Throws if either sequence is empty.
double discrete_frechet(std::span<const Point> p, std::span<const Point> q);

}  // namespace levelblend
