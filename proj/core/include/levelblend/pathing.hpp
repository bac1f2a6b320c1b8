#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "levelblend/grid.hpp"
#include "levelblend/physics.hpp"

namespace levelblend {

/// Cells visited by an agent from column 0 to the last column, one move apart.
struct AgentPath {
  std::vector<Point> points;
  /// Number of moves (path length in steps).
  int cost() const { return points.empty() ? 0 : static_cast<int>(points.size()) - 1; }
};

/// Agent state: a cell plus where the agent is inside a jump arc.
/// `mode` 0 means not mid-jump; other values index (arc, step) pairs.
struct AgentState {
  Point pos;
  int mode = 0;
  constexpr bool operator==(const AgentState&) const = default;
};

/// Tile-grid movement rules for one grid under one game's physics.
///
/// Moves, each one cell and cost 1:
///  - grounded (standing on a standable tile, or inside a climbable tile when the
///    game can climb): walk one column left/right, climb up/down on climbables,
///    or take the first step of any arc (mirrored arcs cover leftward jumps);
///  - mid-arc: take the arc's next step; if that cell is blocked or the arc is
///    over, the agent continues as if not jumping from its current cell;
///  - unsupported and not jumping: fall one row, drifting one column sideways if
///    the game has air control. Falling out of the grid ends the agent.
/// Hazard tiles are never entered (unless overridden); solid tiles only when
/// they are also passable.
class MovementModel {
 public:
  MovementModel(const TileGrid& grid, const JumpPhysics& physics);

  bool enterable(int row, int col) const;
  bool standable(int row, int col) const;
  bool supported(Point p) const;

  /// Grounded, enterable cells of column 0.
  std::vector<AgentState> starts() const;
  void successors(const AgentState& s, std::vector<AgentState>& out) const;

  int mode_count() const { return static_cast<int>(mode_arc_.size()); }
  const TileGrid& grid() const { return grid_; }

 private:
  void free_successors(Point p, std::vector<AgentState>& out) const;
  void push_if_enterable(Point p, int mode, std::vector<AgentState>& out) const;

  const TileGrid& grid_;
  const JumpPhysics& physics_;
  std::vector<JumpArc> directed_arcs_;
  std::vector<int> arc_first_mode_;  // mode id of step 0 for each directed arc
  std::vector<int> mode_arc_;        // mode id -> directed arc (-1 for free)
  std::vector<int> mode_step_;       // mode id -> step index
};

/// Minimum-length traversal by A* (heuristic: columns left to the goal).
/// Returns nullopt when no cell of the last column is reachable.
std::optional<AgentPath> find_path(const Segment& segment, const JumpPhysics& physics);
std::optional<AgentPath> find_path(const TileGrid& grid, const JumpPhysics& physics);

/// Replays a point sequence against the movement rules. Returns an explanation
/// of the first illegal step, or nullopt when the path is legal and complete.
std::optional<std::string> check_path(const TileGrid& grid, const JumpPhysics& physics, std::span<const Point> points);

class PathFailure : public Error {
 public:
  using Error::Error;
};

/// Writes `P` over the background cells of the agent path and records the path.
/// Throws PathFailure when the segment cannot be traversed.
Segment annotate_segment(const Segment& segment, const JumpPhysics& physics);

/// `P` cells in column-major order, top-to-bottom within a column.
std::vector<Point> extract_generated_path(const Segment& segment);

/// Replaces every `P` with background; all other cells untouched.
Segment strip_path(const Segment& segment);

/// Percentage of segments the agent cannot traverse.
double agent_failure_rate(std::span<const Segment> segments, const JumpPhysics& physics);

/// Path dump: one `row,col` line per point.
std::string format_path_dump(std::span<const Point> points);
std::vector<Point> parse_path_dump(std::string_view text);

}  // namespace levelblend
