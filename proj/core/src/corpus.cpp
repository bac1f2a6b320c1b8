#include "levelblend/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

#include "levelblend/io.hpp"
#include "levelblend/random.hpp"
#include "levelblend/tiles.hpp"

namespace levelblend {
namespace {

char single_char(const std::string& s, const std::string& what) {
  if (s.size() != 1) throw Error(fmt::format("{} must be a single character, got \"{}\"", what, s));
  return s[0];
}

}  // namespace

GameConfig load_game_config(const std::filesystem::path& file) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(file));
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("{}: {}", file.string(), e.what()));
  }
  GameConfig config;
  try {
    config.game_id = j.at("game").get<std::string>();
    config.name = j.value("name", config.game_id);
    config.physics_ref = j.value("physics", config.game_id);
    for (const auto& d : j.value("doors", std::vector<std::string>{})) {
      config.door_symbols.insert(single_char(d, "door symbol"));
    }
    for (const auto& [raw, uniform] : j.at("tiles").items()) {
      const char to = single_char(uniform.get<std::string>(), "uniform symbol");
      if (!tiles::is_symbol(to) || to == tiles::kPath) {
        throw Error(fmt::format("'{}' maps to '{}', which is not a uniform tile", raw, to));
      }
      config.char_map[single_char(raw, "raw tile")] = to;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("{}: {}", file.string(), e.what()));
  }
  for (char d : config.door_symbols) {
    if (!config.char_map.contains(d)) {
      throw Error(fmt::format("{}: door symbol '{}' has no tile mapping", file.string(), d));
    }
  }
  return config;
}

GameConfig load_game_config(const std::filesystem::path& dir, const std::string& game_id) {
  return load_game_config(dir / (game_id + ".json"));
}

Level parse_level(std::string_view text, const GameConfig& config, const std::string& source) {
  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
      lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
  }
  if (lines.empty()) throw Error(fmt::format("{}: empty level", source));

  const std::size_t width = lines.front().size();
  Level level;
  level.game = config.game_id;
  level.source = source;
  level.grid = TileGrid(static_cast<int>(lines.size()), static_cast<int>(width), tiles::kBackground);
  for (std::size_t r = 0; r < lines.size(); ++r) {
    if (lines[r].size() != width) {
      throw Error(fmt::format("{}: row {} has width {}, expected {} (level is not rectangular)", source, r,
                              lines[r].size(), width));
    }
    for (std::size_t c = 0; c < width; ++c) {
      const char raw = lines[r][c];
      auto it = config.char_map.find(raw);
      if (it == config.char_map.end()) {
        throw LevelLoadError(fmt::format("{}: unmapped character '{}' at row {}, column {} for game {}", source, raw,
                                         r, c, config.game_id),
                             raw, static_cast<int>(r), static_cast<int>(c));
      }
      level.grid.at(static_cast<int>(r), static_cast<int>(c)) = it->second;
      if (config.door_symbols.contains(raw)) level.doors.push_back({static_cast<int>(r), static_cast<int>(c)});
    }
  }
  return level;
}

Level load_level(const std::filesystem::path& file, const GameConfig& config) {
  return parse_level(read_file(file), config, file.filename().string());
}

std::vector<Segment> segment_level(const Level& level, const GameConfig& /*config*/, SegmentOptions options) {
  const int width = level.grid.cols();
  if (width < kSegmentCols) {
    throw Error(fmt::format("{}: level width {} is below the segment width {}", level.source, width, kSegmentCols));
  }
  if (level.grid.rows() > kSegmentRows) {
    throw Error(fmt::format("{}: level height {} exceeds {} rows; only horizontal sections are supported",
                            level.source, level.grid.rows(), kSegmentRows));
  }
  if (options.stride < 1) throw Error("window stride must be positive");

  const int pad = kSegmentRows - level.grid.rows();
  const TileGrid padded = pad > 0 ? level.grid.pad_top(pad, tiles::kNull) : level.grid;

  std::vector<Segment> out;
  for (int offset = 0; offset + kSegmentCols <= width; offset += options.stride) {
    const bool interior_door = std::any_of(level.doors.begin(), level.doors.end(), [&](const Point& d) {
      return d.col > offset && d.col < offset + kSegmentCols - 1;
    });
    if (interior_door) continue;
    Segment s(level.game, padded.window(offset, kSegmentCols));
    s.source = level.source;
    s.offset = offset;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Segment> deduplicate(const std::vector<Segment>& segments) {
  std::unordered_set<std::string> seen;
  std::vector<Segment> out;
  for (const auto& s : segments) {
    std::string key(s.grid.cells());
    std::replace(key.begin(), key.end(), tiles::kPath, tiles::kBackground);
    if (seen.insert(std::move(key)).second) out.push_back(s);
  }
  return out;
}

std::map<std::string, std::size_t> Corpus::per_game_counts() const {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : segments) ++counts[s.game];
  return counts;
}

Corpus oversample(const Corpus& corpus, std::uint64_t seed) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < corpus.segments.size(); ++i) {
    const auto& g = corpus.segments[i].game;
    if (!members.contains(g)) order.push_back(g);
    members[g].push_back(i);
  }
  if (order.empty()) throw Error("cannot oversample an empty corpus");

  std::size_t target = 0;
  for (const auto& [g, idx] : members) target = std::max(target, idx.size());

  Corpus out = corpus;
  for (const auto& g : order) {
    const auto& idx = members[g];
    Rng rng = make_rng(seed, "oversample:" + g);
    for (std::size_t n = idx.size(); n < target; ++n) {
      out.segments.push_back(corpus.segments[idx[uniform_index(rng, idx.size())]]);
    }
  }
  return out;
}

std::vector<double> one_hot_encode(const Segment& segment, int vocab_size) {
  if (vocab_size < tiles::kSymbolCount) {
    throw Error(fmt::format("vocab size {} is smaller than the {} tile symbols", vocab_size, tiles::kSymbolCount));
  }
  if (segment.grid.rows() != kSegmentRows || segment.grid.cols() != kSegmentCols) {
    throw Error("one_hot_encode expects a 15x32 segment");
  }
  std::vector<double> out(static_cast<std::size_t>(kSegmentCells) * static_cast<std::size_t>(vocab_size), 0.0);
  const auto cells = segment.grid.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto idx = tiles::index_of(cells[i]);
    if (!idx) throw Error(fmt::format("symbol '{}' has no channel", cells[i]));
    out[i * static_cast<std::size_t>(vocab_size) + static_cast<std::size_t>(*idx)] = 1.0;
  }
  return out;
}

Segment one_hot_decode(std::span<const double> vector, int vocab_size) {
  const auto v = static_cast<std::size_t>(vocab_size);
  if (vocab_size < tiles::kSymbolCount || vector.size() != static_cast<std::size_t>(kSegmentCells) * v) {
    throw Error(fmt::format("one_hot_decode: expected length {} x {}, got {}", kSegmentCells, vocab_size,
                            vector.size()));
  }
  Segment s;
  for (int cell = 0; cell < kSegmentCells; ++cell) {
    const auto base = static_cast<std::size_t>(cell) * v;
    // Only the legal channels compete; extra channels of a wider vocabulary are reserved.
    int best = 0;
    for (int k = 1; k < tiles::kSymbolCount; ++k) {
      if (vector[base + static_cast<std::size_t>(k)] > vector[base + static_cast<std::size_t>(best)]) best = k;
    }
    s.grid.at(cell / kSegmentCols, cell % kSegmentCols) = tiles::symbol_at(best);
  }
  return s;
}

std::vector<char> linearize(const Segment& segment) {
  std::vector<char> tokens;
  tokens.reserve(kSegmentCells);
  for (int c = 0; c < kSegmentCols; ++c) {
    for (int r = 0; r < kSegmentRows; ++r) tokens.push_back(segment.grid.at(r, c));
  }
  return tokens;
}

Segment delinearize(std::span<const char> tokens) {
  if (tokens.size() != static_cast<std::size_t>(kSegmentCells)) {
    throw Error(fmt::format("delinearize: expected {} tokens, got {}", kSegmentCells, tokens.size()));
  }
  Segment s;
  for (int c = 0; c < kSegmentCols; ++c) {
    for (int r = 0; r < kSegmentRows; ++r) s.grid.at(r, c) = tokens[static_cast<std::size_t>(c * kSegmentRows + r)];
  }
  return s;
}

}  // namespace levelblend
