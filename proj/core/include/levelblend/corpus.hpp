#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "levelblend/grid.hpp"

namespace levelblend {

/// Game ids of the five domains. SMB covers Super Mario Bros. and The Lost Levels.
inline const std::vector<std::string> kGameIds = {"CV", "MM", "Met", "SMB", "NG"};

/// How one game's raw level characters map onto the uniform tileset.
struct GameConfig {
  std::string game_id;
  std::string name;
  std::map<char, char> char_map;  // raw -> uniform symbol
  std::set<char> door_symbols;    // raw characters treated as doors
  std::string physics_ref;
};

/// Parses a game config file (JSON with "game", "physics", "doors", "tiles").
GameConfig load_game_config(const std::filesystem::path& file);

/// Loads `<dir>/<game_id>.json`.
GameConfig load_game_config(const std::filesystem::path& dir, const std::string& game_id);

/// Thrown when a level file cannot be mapped; carries the offending location.
class LevelLoadError : public Error {
 public:
  LevelLoadError(const std::string& message, char symbol, int row, int col)
      : Error(message), symbol_(symbol), row_(row), col_(col) {}
  char symbol() const { return symbol_; }
  int row() const { return row_; }
  int col() const { return col_; }

 private:
  char symbol_;
  int row_;
  int col_;
};

Level load_level(const std::filesystem::path& file, const GameConfig& config);
Level parse_level(std::string_view text, const GameConfig& config, const std::string& source = "<memory>");

struct SegmentOptions {
  int stride = 1;
};

/// Slides a 15x32 window across the level. Rows shorter than 15 are padded at the
/// top with null tiles; windows with a door away from their left/right column are
/// dropped. Door positions are the ones recorded in `level.doors` at load time.
std::vector<Segment> segment_level(const Level& level, const GameConfig& config, SegmentOptions options = {});

/// Keeps the first occurrence of each distinct grid (path tiles ignored).
std::vector<Segment> deduplicate(const std::vector<Segment>& segments);

struct Corpus {
  std::vector<Segment> segments;
  std::map<std::string, std::size_t> per_game_counts() const;
};

/// Tops every game up to the largest game's count by drawing its own segments
/// uniformly with replacement. Added segments are appended after the originals.
Corpus oversample(const Corpus& corpus, std::uint64_t seed);

std::vector<double> one_hot_encode(const Segment& segment, int vocab_size);
Segment one_hot_decode(std::span<const double> vector, int vocab_size);

/// Column-major, top-to-bottom token order: token index = col * 15 + row.
std::vector<char> linearize(const Segment& segment);
Segment delinearize(std::span<const char> tokens);

}  // namespace levelblend
