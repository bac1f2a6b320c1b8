#include "levelblend/tiles.hpp"

#include <string>

#include "levelblend/grid.hpp"

namespace levelblend {

std::string to_string(AffordanceSet set) {
  static constexpr std::pair<Affordance, const char*> kNames[] = {
      {Affordance::kSolid, "solid"},         {Affordance::kClimbable, "climbable"},
      {Affordance::kPassable, "passable"},   {Affordance::kPowerup, "powerup"},
      {Affordance::kHazard, "hazard"},       {Affordance::kMoving, "moving"},
      {Affordance::kPortal, "portal"},       {Affordance::kCollectable, "collectable"},
      {Affordance::kBreakable, "breakable"}, {Affordance::kNull, "null"},
  };
  std::string out;
  for (const auto& [a, name] : kNames) {
    if (!set.has(a)) continue;
    if (!out.empty()) out += ',';
    out += name;
  }
  return out.empty() ? "none" : out;
}

namespace tiles {

using A = Affordance;

AffordanceSet affordances(char symbol) {
  switch (symbol) {
    case 'X': return {A::kSolid};
    case 'S': return {A::kSolid, A::kBreakable};
    case '#': return {A::kSolid, A::kMoving};
    case '|': return {A::kSolid, A::kPassable, A::kClimbable};
    case 'v': return {A::kHazard};
    case '^': return {A::kSolid, A::kHazard};
    case 'e': return {A::kMoving, A::kHazard};
    case 'E': return {A::kSolid, A::kMoving, A::kPassable, A::kHazard};
    case 'o': return {A::kCollectable};
    case '*': return {A::kCollectable, A::kPowerup};
    case 'Q': return {A::kSolid, A::kCollectable};
    case '!': return {A::kSolid, A::kPowerup};
    case '$': return {A::kPortal};
    case '@': return {A::kSolid, A::kNull, A::kHazard};
    case 'P': return {A::kPassable};
    case '-': return {};
    default: throw std::invalid_argument(std::string("not a tile symbol: '") + symbol + "'");
  }
}

bool is_symbol(char c) { return index_of(c).has_value(); }

std::optional<int> index_of(char c) {
  for (int i = 0; i < kSymbolCount; ++i) {
    if (kAlphabet[i] == c) return i;
  }
  return std::nullopt;
}

char symbol_at(int index) {
  if (index < 0 || index >= kSymbolCount) {
    throw Error("tile channel " + std::to_string(index) + " has no symbol");
  }
  return kAlphabet[index];
}

bool is_hazard(char symbol) { return affordances(symbol).has(A::kHazard); }

bool is_interesting(char symbol) {
  auto a = affordances(symbol);
  return a.has(A::kPowerup) || a.has(A::kPortal) || a.has(A::kCollectable);
}

bool is_occupied(char symbol) { return symbol != kBackground && symbol != kPath; }

}  // namespace tiles
}  // namespace levelblend
