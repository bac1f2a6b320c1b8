#include "levelblend/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace levelblend {
namespace {

double euclidean(const Point& a, const Point& b) {
  return std::hypot(static_cast<double>(a.row - b.row), static_cast<double>(a.col - b.col));
}

}  // namespace

double discrete_frechet(std::span<const Point> p, std::span<const Point> q) {
  if (p.empty() || q.empty()) throw Error("discrete_frechet needs two non-empty point lists");
  const std::size_t m = q.size();
  // Two rolling rows of the coupling table.
  std::vector<double> prev(m), cur(m);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = euclidean(p[i], q[j]);
      if (i == 0 && j == 0) {
        cur[j] = d;
      } else if (i == 0) {
        cur[j] = std::max(cur[j - 1], d);
      } else if (j == 0) {
        cur[j] = std::max(prev[j], d);
      } else {
        cur[j] = std::max(std::min({prev[j], prev[j - 1], cur[j - 1]}), d);
      }
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

}  // namespace levelblend
