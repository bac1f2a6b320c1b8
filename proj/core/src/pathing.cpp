#include "levelblend/pathing.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>

#include <fmt/format.h>

#include "levelblend/tiles.hpp"

namespace levelblend {

MovementModel::MovementModel(const TileGrid& grid, const JumpPhysics& physics) : grid_(grid), physics_(physics) {
  for (const auto& arc : physics.arcs) {
    directed_arcs_.push_back(arc);
    const bool vertical = std::all_of(arc.begin(), arc.end(), [](const ArcOffset& o) { return o.dx == 0; });
    if (!vertical) {
      JumpArc mirrored = arc;
      for (auto& o : mirrored) o.dx = -o.dx;
      directed_arcs_.push_back(std::move(mirrored));
    }
  }
  mode_arc_.push_back(-1);
  mode_step_.push_back(0);
  for (std::size_t a = 0; a < directed_arcs_.size(); ++a) {
    arc_first_mode_.push_back(static_cast<int>(mode_arc_.size()));
    for (std::size_t i = 0; i < directed_arcs_[a].size(); ++i) {
      mode_arc_.push_back(static_cast<int>(a));
      mode_step_.push_back(static_cast<int>(i));
    }
  }
}

bool MovementModel::enterable(int row, int col) const {
  if (!grid_.contains(row, col)) return false;
  const char s = grid_.at(row, col);
  const auto a = tiles::affordances(s);
  if (a.has(Affordance::kHazard) && !physics_.enterable_hazards.contains(s)) return false;
  if (a.has(Affordance::kSolid) && !a.has(Affordance::kPassable)) return false;
  return true;
}

bool MovementModel::standable(int row, int col) const {
  if (!grid_.contains(row, col)) return false;
  const char s = grid_.at(row, col);
  const auto a = tiles::affordances(s);
  if (!a.has(Affordance::kSolid)) return false;
  // Enemies the player can jump on keep a standable top.
  return !a.has(Affordance::kHazard) || s == 'E';
}

bool MovementModel::supported(Point p) const {
  if (standable(p.row + 1, p.col)) return true;
  return physics_.can_climb && tiles::affordances(grid_.at(p)).has(Affordance::kClimbable);
}

std::vector<AgentState> MovementModel::starts() const {
  std::vector<AgentState> out;
  for (int r = 0; r < grid_.rows(); ++r) {
    if (enterable(r, 0) && supported({r, 0})) out.push_back({{r, 0}, 0});
  }
  return out;
}

void MovementModel::push_if_enterable(Point p, int mode, std::vector<AgentState>& out) const {
  if (enterable(p.row, p.col)) out.push_back({p, mode});
}

void MovementModel::free_successors(Point p, std::vector<AgentState>& out) const {
  if (!supported(p)) {
    push_if_enterable({p.row + 1, p.col}, 0, out);
    if (physics_.air_control) {
      push_if_enterable({p.row + 1, p.col - 1}, 0, out);
      push_if_enterable({p.row + 1, p.col + 1}, 0, out);
    }
    return;
  }
  push_if_enterable({p.row, p.col - 1}, 0, out);
  push_if_enterable({p.row, p.col + 1}, 0, out);
  if (physics_.can_climb) {
    if (tiles::affordances(grid_.at(p)).has(Affordance::kClimbable)) push_if_enterable({p.row - 1, p.col}, 0, out);
    if (grid_.contains(p.row + 1, p.col) &&
        tiles::affordances(grid_.at(p.row + 1, p.col)).has(Affordance::kClimbable)) {
      push_if_enterable({p.row + 1, p.col}, 0, out);
    }
  }
  for (std::size_t a = 0; a < directed_arcs_.size(); ++a) {
    const auto& first = directed_arcs_[a].front();
    push_if_enterable({p.row + first.dy, p.col + first.dx}, arc_first_mode_[a], out);
  }
}

void MovementModel::successors(const AgentState& s, std::vector<AgentState>& out) const {
  out.clear();
  if (s.mode != 0) {
    const auto& arc = directed_arcs_[static_cast<std::size_t>(mode_arc_[static_cast<std::size_t>(s.mode)])];
    const auto step = static_cast<std::size_t>(mode_step_[static_cast<std::size_t>(s.mode)]);
    if (step + 1 < arc.size()) {
      const Point next{s.pos.row + arc[step + 1].dy - arc[step].dy, s.pos.col + arc[step + 1].dx - arc[step].dx};
      if (enterable(next.row, next.col)) {
        out.push_back({next, s.mode + 1});
        return;
      }
    }
    // Arc finished or blocked: carry on from the current cell.
  }
  free_successors(s.pos, out);
}

std::optional<AgentPath> find_path(const TileGrid& grid, const JumpPhysics& physics) {
  const MovementModel model(grid, physics);
  const int modes = model.mode_count();
  const int cols = grid.cols();
  auto id_of = [&](const AgentState& s) { return (s.pos.row * cols + s.pos.col) * modes + s.mode; };
  auto state_of = [&](int id) {
    const int cell = id / modes;
    return AgentState{{cell / cols, cell % cols}, id % modes};
  };

  const std::size_t n = grid.size() * static_cast<std::size_t>(modes);
  std::vector<int> g(n, std::numeric_limits<int>::max());
  std::vector<int> parent(n, -1);
  std::vector<char> closed(n, 0);

  struct Entry {
    int f;
    int g;
    std::uint64_t seq;
    int id;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    return a.seq > b.seq;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> open(worse);
  std::uint64_t seq = 0;
  auto heuristic = [&](const AgentState& s) { return cols - 1 - s.pos.col; };

  for (const auto& s : model.starts()) {
    const int id = id_of(s);
    g[static_cast<std::size_t>(id)] = 0;
    open.push({heuristic(s), 0, seq++, id});
  }

  std::vector<AgentState> next;
  while (!open.empty()) {
    const Entry e = open.top();
    open.pop();
    const auto uid = static_cast<std::size_t>(e.id);
    if (closed[uid] || e.g != g[uid]) continue;
    closed[uid] = 1;
    const AgentState s = state_of(e.id);
    if (s.pos.col == cols - 1) {
      AgentPath path;
      for (int id = e.id; id != -1; id = parent[static_cast<std::size_t>(id)]) path.points.push_back(state_of(id).pos);
      std::reverse(path.points.begin(), path.points.end());
      return path;
    }
    model.successors(s, next);
    for (const auto& t : next) {
      const auto tid = static_cast<std::size_t>(id_of(t));
      if (closed[tid]) continue;
      const int ng = e.g + 1;
      if (ng < g[tid]) {
        g[tid] = ng;
        parent[tid] = e.id;
        open.push({ng + heuristic(t), ng, seq++, static_cast<int>(tid)});
      }
    }
  }
  return std::nullopt;
}

std::optional<AgentPath> find_path(const Segment& segment, const JumpPhysics& physics) {
  return find_path(segment.grid, physics);
}

std::optional<std::string> check_path(const TileGrid& grid, const JumpPhysics& physics,
                                      std::span<const Point> points) {
  if (points.empty()) return "empty path";
  const MovementModel model(grid, physics);
  if (points.front().col != 0) return fmt::format("path starts in column {}, not 0", points.front().col);
  if (points.back().col != grid.cols() - 1) {
    return fmt::format("path ends in column {}, not {}", points.back().col, grid.cols() - 1);
  }
  std::vector<AgentState> current;
  for (const auto& s : model.starts()) {
    if (s.pos == points.front()) current.push_back(s);
  }
  if (current.empty()) {
    return fmt::format("({}, {}) is not a valid start cell", points.front().row, points.front().col);
  }
  std::vector<AgentState> next;
  std::vector<AgentState> succ;
  for (std::size_t i = 1; i < points.size(); ++i) {
    next.clear();
    for (const auto& s : current) {
      model.successors(s, succ);
      for (const auto& t : succ) {
        if (t.pos == points[i] && std::find(next.begin(), next.end(), t) == next.end()) next.push_back(t);
      }
    }
    if (next.empty()) {
      return fmt::format("step {}: ({}, {}) -> ({}, {}) is not a legal move", i, points[i - 1].row, points[i - 1].col,
                         points[i].row, points[i].col);
    }
    current.swap(next);
  }
  return std::nullopt;
}

Segment annotate_segment(const Segment& segment, const JumpPhysics& physics) {
  auto path = find_path(segment, physics);
  if (!path) {
    throw PathFailure(fmt::format("{} agent cannot traverse segment {}@{}", physics.game_id, segment.source,
                                  segment.offset));
  }
  Segment out = segment;
  for (const auto& p : path->points) {
    char& cell = out.grid.at(p.row, p.col);
    if (cell == tiles::kBackground) cell = tiles::kPath;
  }
  out.annotated = true;
  out.path = std::move(path->points);
  return out;
}

std::vector<Point> extract_generated_path(const Segment& segment) {
  std::vector<Point> out;
  for (int c = 0; c < segment.grid.cols(); ++c) {
    for (int r = 0; r < segment.grid.rows(); ++r) {
      if (segment.grid.at(r, c) == tiles::kPath) out.push_back({r, c});
    }
  }
  return out;
}

Segment strip_path(const Segment& segment) {
  Segment out = segment;
  for (int r = 0; r < out.grid.rows(); ++r) {
    for (int c = 0; c < out.grid.cols(); ++c) {
      if (out.grid.at(r, c) == tiles::kPath) out.grid.at(r, c) = tiles::kBackground;
    }
  }
  out.annotated = false;
  out.path.clear();
  return out;
}

double agent_failure_rate(std::span<const Segment> segments, const JumpPhysics& physics) {
  if (segments.empty()) throw Error("agent_failure_rate over an empty segment list");
  std::size_t failures = 0;
  for (const auto& s : segments) {
    if (!find_path(s, physics)) ++failures;
  }
  return 100.0 * static_cast<double>(failures) / static_cast<double>(segments.size());
}

std::string format_path_dump(std::span<const Point> points) {
  std::string out;
  for (const auto& p : points) out += fmt::format("{},{}\n", p.row, p.col);
  return out;
}

std::vector<Point> parse_path_dump(std::string_view text) {
  std::vector<Point> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    Point p;
    char comma = 0;
    std::istringstream ls(line);
    if (!(ls >> p.row >> comma >> p.col) || comma != ',') {
      throw Error(fmt::format("path dump line {}: expected row,col", line_no));
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace levelblend
