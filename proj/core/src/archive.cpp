#include "levelblend/archive.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>
#include <json.hpp>

#include "levelblend/io.hpp"
#include "levelblend/pathing.hpp"

namespace levelblend {
namespace fs = std::filesystem;

std::string toolkit_version() { return "0.1.0"; }

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config_paths"] = config_paths;
  j["seed"] = seed;
  j["inputs"] = inputs;
  j["output"] = output;
  j["version"] = version.empty() ? toolkit_version() : version;
  j["settings"] = settings;
  return j.dump(2) + "\n";
}

IngestResult ingest_corpus(const fs::path& games_dir, const fs::path& physics_dir, const fs::path& levels_dir,
                           const IngestOptions& options) {
  const auto& games = options.games.empty() ? kGameIds : options.games;
  IngestResult result;
  Corpus originals;
  for (const auto& game : games) {
    const GameConfig config = load_game_config(games_dir, game);
    const JumpPhysics physics = load_physics(physics_dir, config.physics_ref);
    auto& stats = result.stats[game];

    std::vector<fs::path> files;
    const fs::path dir = levels_dir / game;
    if (!fs::is_directory(dir)) throw Error(fmt::format("no level directory {}", dir.string()));
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error(fmt::format("no level files in {}", dir.string()));

    std::vector<Segment> windows;
    for (const auto& file : files) {
      Level level = load_level(file, config);
      level.source = game + "/" + file.filename().string();
      result.level_files.push_back(level.source);
      auto segs = segment_level(level, config, options.segmenting);
      windows.insert(windows.end(), std::make_move_iterator(segs.begin()), std::make_move_iterator(segs.end()));
      ++stats.levels;
    }
    stats.windows = windows.size();
    const auto unique = deduplicate(windows);
    stats.unique = unique.size();
    std::size_t kept = 0;
    for (const auto& s : unique) {
      try {
        originals.segments.push_back(annotate_segment(s, physics));
        ++kept;
      } catch (const PathFailure&) {
        ++stats.unsolvable;
      }
    }
    if (kept == 0) throw Error(fmt::format("game {} has no traversable segments", game));
  }

  const std::size_t original_count = originals.segments.size();
  result.corpus = oversample(originals, options.seed);
  // Oversampled copies are exact duplicates of a unique original of the same game.
  std::unordered_map<std::string, long> first;
  for (std::size_t i = 0; i < result.corpus.segments.size(); ++i) {
    const auto& s = result.corpus.segments[i];
    const std::string key = s.game + '\n' + std::string(s.grid.cells());
    if (i < original_count) {
      first.emplace(key, static_cast<long>(i));
      result.copy_of.push_back(-1);
    } else {
      result.copy_of.push_back(first.at(key));
    }
  }
  for (const auto& [game, count] : result.corpus.per_game_counts()) result.stats[game].final_count = count;
  return result;
}

void write_corpus_archive(const fs::path& dir, const IngestResult& result, const RunManifest* manifest) {
  fs::create_directories(dir);
  fs::remove_all(dir / "segments");
  fs::remove_all(dir / "paths");
  fs::create_directories(dir / "segments");
  fs::create_directories(dir / "paths");
  std::string csv = "id,game,source_level,offset,file,path_file,copy_of\n";
  const auto& segments = result.corpus.segments;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    const std::string id = fmt::format("{:05d}", i);
    const std::string file = "segments/" + id + ".txt";
    const std::string path_file = s.annotated ? "paths/" + id + ".path" : "";
    write_file(dir / file, to_text(s.grid));
    if (s.annotated) write_file(dir / path_file, format_path_dump(s.path));
    const long copy = i < result.copy_of.size() ? result.copy_of[i] : -1;
    csv += fmt::format("{},{},{},{},{},{},{}\n", id, s.game, s.source, s.offset, file, path_file,
                       copy < 0 ? std::string() : fmt::format("{:05d}", copy));
  }
  write_file(dir / "manifest.csv", csv);
  if (manifest) write_file(dir / "run.json", manifest->to_json());
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CorpusArchive read_corpus_archive(const fs::path& dir) {
  const std::string text = read_file(dir / "manifest.csv");
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (line != "id,game,source_level,offset,file,path_file,copy_of") {
    throw Error(fmt::format("{}: unexpected manifest header", (dir / "manifest.csv").string()));
  }
  CorpusArchive archive;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 7) throw Error(fmt::format("manifest.csv:{}: expected 7 fields", line_no));
    Segment s(f[1], grid_from_text(read_file(dir / f[4])));
    s.source = f[2];
    s.offset = std::stoi(f[3]);
    if (!f[5].empty()) {
      s.annotated = true;
      s.path = parse_path_dump(read_file(dir / f[5]));
    }
    s.validate();
    archive.copy_of.push_back(f[6].empty() ? -1 : std::stol(f[6]));
    archive.corpus.segments.push_back(std::move(s));
  }
  return archive;
}

}  // namespace levelblend
