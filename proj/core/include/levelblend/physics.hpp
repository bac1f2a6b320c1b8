#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

namespace levelblend {

/// One step of a jump arc relative to the takeoff cell. dy < 0 is up.
struct ArcOffset {
  int dx = 0;
  int dy = 0;
  constexpr bool operator==(const ArcOffset&) const = default;
};

using JumpArc = std::vector<ArcOffset>;

/// Per-game movement model for the path agent. Arcs are authored facing right;
/// the agent mirrors them for leftward jumps.
struct JumpPhysics {
  std::string game_id;
  bool variable_jump = true;
  bool can_climb = false;
  /// Horizontal drift of one column per row while falling.
  bool air_control = true;
  /// Hazard symbols the agent may still occupy.
  std::set<char> enterable_hazards;
  std::vector<JumpArc> arcs;

  /// Throws unless every arc moves one cell (king move) per step and the
  /// fixed-height rule holds when variable_jump is false.
  void validate() const;

  /// Rise of the highest arc, in cells.
  int max_jump_height() const;
};

JumpPhysics load_physics(const std::filesystem::path& file);
JumpPhysics load_physics(const std::filesystem::path& dir, const std::string& game_id);

}  // namespace levelblend
