#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace levelblend {

/// Gameplay properties a tile can carry. Tiles combine them as a bit set.
enum class Affordance : std::uint16_t {
  kSolid = 1u << 0,
  kClimbable = 1u << 1,
  kPassable = 1u << 2,
  kPowerup = 1u << 3,
  kHazard = 1u << 4,
  kMoving = 1u << 5,
  kPortal = 1u << 6,
  kCollectable = 1u << 7,
  kBreakable = 1u << 8,
  kNull = 1u << 9,
};

class AffordanceSet {
 public:
  constexpr AffordanceSet() = default;
  constexpr AffordanceSet(std::initializer_list<Affordance> items) {
    for (auto a : items) bits_ |= static_cast<std::uint16_t>(a);
  }

  constexpr bool has(Affordance a) const { return (bits_ & static_cast<std::uint16_t>(a)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint16_t bits() const { return bits_; }
  constexpr bool operator==(const AffordanceSet&) const = default;

 private:
  std::uint16_t bits_ = 0;
};

std::string to_string(AffordanceSet set);

namespace tiles {

inline constexpr char kBackground = '-';
inline constexpr char kPath = 'P';
inline constexpr char kNull = '@';

/// Number of legal symbols: 14 uniform tiles plus background and path.
inline constexpr int kSymbolCount = 16;

/// Channel order used by every encoder. Background is channel 0.
inline constexpr std::array<char, kSymbolCount> kAlphabet = {
    '-', 'X', 'S', '#', '|', 'v', '^', 'e', 'E', 'o', '*', 'Q', '!', '$', '@', 'P'};

inline constexpr int kDefaultVocabSize = kSymbolCount;

bool is_symbol(char c);

/// Channel index of a legal symbol, or nullopt.
std::optional<int> index_of(char c);

/// Symbol at a channel index. Throws for indices outside the alphabet.
char symbol_at(int index);

AffordanceSet affordances(char symbol);

bool is_hazard(char symbol);
bool is_interesting(char symbol);  // powerups, portals, collectables
bool is_occupied(char symbol);     // anything but background and path

}  // namespace tiles
}  // namespace levelblend
