#include "levelblend/metrics.hpp"

#include <cmath>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "levelblend/tiles.hpp"

namespace levelblend {
namespace {

template <typename Pred>
double percent_of_cells(const Segment& segment, Pred pred) {
  const auto cells = segment.grid.cells();
  if (cells.empty()) return 0.0;
  std::size_t hits = 0;
  for (char c : cells) {
    if (pred(c)) ++hits;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(cells.size());
}

}  // namespace

double density(const Segment& segment) { return percent_of_cells(segment, tiles::is_occupied); }

double leniency(const Segment& segment) {
  return percent_of_cells(segment, [](char c) { return !tiles::is_hazard(c); });
}

double interestingness(const Segment& segment) { return percent_of_cells(segment, tiles::is_interesting); }

double nonlinearity(const Segment& segment, NonlinearityStat stat) {
  const auto& g = segment.grid;
  std::vector<std::pair<double, double>> samples;
  for (int c = 0; c < g.cols(); ++c) {
    for (int r = 0; r < g.rows(); ++r) {
      const char s = g.at(r, c);
      if (tiles::is_occupied(s) && s != tiles::kNull) {
        samples.emplace_back(static_cast<double>(c), static_cast<double>(r));
        break;
      }
    }
  }
  if (samples.size() < 2) return 0.0;

  const double n = static_cast<double>(samples.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : samples) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : samples) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  const double slope = sxy / sxx;  // sxx > 0: columns are distinct
  const double intercept = my - slope * mx;

  double acc = 0.0;
  for (const auto& [x, y] : samples) {
    const double r = y - (intercept + slope * x);
    acc += stat == NonlinearityStat::kRootMeanSquare ? r * r : std::abs(r);
  }
  return stat == NonlinearityStat::kRootMeanSquare ? std::sqrt(acc / n) : acc / n;
}

double path_proportion(const Segment& segment) {
  if (!segment.annotated) throw Error("path_proportion needs an annotated segment");
  const auto& g = segment.grid;
  std::set<std::pair<int, int>> cells;
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      if (g.at(r, c) == tiles::kPath) cells.emplace(r, c);
    }
  }
  for (const auto& p : segment.path) {
    if (g.contains(p.row, p.col)) cells.emplace(p.row, p.col);
  }
  return 100.0 * static_cast<double>(cells.size()) / static_cast<double>(g.size());
}

FeatureVector feature_vector(const Segment& segment) {
  return {density(segment), nonlinearity(segment), leniency(segment), interestingness(segment),
          path_proportion(segment)};
}

std::vector<FeatureVector> feature_vectors(std::span<const Segment> segments) {
  std::vector<FeatureVector> out;
  out.reserve(segments.size());
  for (const auto& s : segments) out.push_back(feature_vector(s));
  return out;
}

std::string feature_csv_header() {
  return "segment_id,game,density,nonlinearity,leniency,interestingness,path_proportion\n";
}

std::string feature_csv_row(const std::string& segment_id, const std::string& game, const FeatureVector& f) {
  return fmt::format("{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", segment_id, game, f.density, f.nonlinearity,
                     f.leniency, f.interestingness, f.path_proportion);
}

}  // namespace levelblend
