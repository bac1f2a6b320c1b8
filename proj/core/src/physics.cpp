#include "levelblend/physics.hpp"

#include <algorithm>
#include <cstdlib>

#include <fmt/format.h>
#include <json.hpp>

#include "levelblend/grid.hpp"
#include "levelblend/io.hpp"
#include "levelblend/tiles.hpp"

namespace levelblend {
namespace {

int apex(const JumpArc& arc) {
  int top = 0;
  for (const auto& o : arc) top = std::min(top, o.dy);
  return -top;
}

}  // namespace

void JumpPhysics::validate() const {
  if (arcs.empty()) throw Error(fmt::format("physics {}: no jump arcs", game_id));
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    const auto& arc = arcs[k];
    if (arc.empty()) throw Error(fmt::format("physics {}: arc {} is empty", game_id, k));
    ArcOffset prev{0, 0};
    for (std::size_t i = 0; i < arc.size(); ++i) {
      const int ddx = arc[i].dx - prev.dx;
      const int ddy = arc[i].dy - prev.dy;
      if (std::abs(ddx) > 1 || std::abs(ddy) > 1 || (ddx == 0 && ddy == 0)) {
        throw Error(fmt::format("physics {}: arc {} step {} moves ({}, {}); each step must reach a neighbouring cell",
                                game_id, k, i, ddx, ddy));
      }
      prev = arc[i];
    }
    if (arc.front().dy >= 0) {
      throw Error(fmt::format("physics {}: arc {} must start upward", game_id, k));
    }
    if (arc.front().dx < 0 || std::any_of(arc.begin(), arc.end(), [](const ArcOffset& o) { return o.dx < 0; })) {
      throw Error(fmt::format("physics {}: arc {} must be authored facing right", game_id, k));
    }
  }
  if (!variable_jump) {
    const int h = apex(arcs.front());
    for (const auto& arc : arcs) {
      if (apex(arc) != h) {
        throw Error(fmt::format("physics {}: fixed-height jumping requires every arc to peak at {} cells", game_id, h));
      }
    }
  }
  for (char c : enterable_hazards) {
    if (!tiles::is_symbol(c) || !tiles::is_hazard(c)) {
      throw Error(fmt::format("physics {}: '{}' is not a hazard tile", game_id, c));
    }
  }
}

int JumpPhysics::max_jump_height() const {
  int h = 0;
  for (const auto& arc : arcs) h = std::max(h, apex(arc));
  return h;
}

JumpPhysics load_physics(const std::filesystem::path& file) {
  const std::string text = read_file(file);
  JumpPhysics p;
  try {
    const auto j = nlohmann::json::parse(text);
    p.game_id = j.at("game").get<std::string>();
    p.variable_jump = j.at("variable_jump").get<bool>();
    p.can_climb = j.value("climb", false);
    p.air_control = j.value("air_control", true);
    for (const auto& s : j.value("enterable_hazards", std::vector<std::string>{})) {
      if (s.size() != 1) throw Error(fmt::format("{}: hazard override \"{}\" is not one character", file.string(), s));
      p.enterable_hazards.insert(s[0]);
    }
    for (const auto& arc_json : j.at("arcs")) {
      JumpArc arc;
      for (const auto& o : arc_json) arc.push_back({o.at(0).get<int>(), o.at(1).get<int>()});
      p.arcs.push_back(std::move(arc));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("{}: {}", file.string(), e.what()));
  }
  p.validate();
  return p;
}

JumpPhysics load_physics(const std::filesystem::path& dir, const std::string& game_id) {
  return load_physics(dir / (game_id + ".json"));
}

}  // namespace levelblend
