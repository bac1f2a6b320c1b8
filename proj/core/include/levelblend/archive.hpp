#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "levelblend/corpus.hpp"
#include "levelblend/physics.hpp"

namespace levelblend {

/// Where one pipeline step came from and what it wrote. Paths are recorded as
/// given, so reruns with the same arguments write the same manifest.
struct RunManifest {
  std::string command;
  std::vector<std::string> config_paths;
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::string output = ".";
  std::string version;
  std::map<std::string, std::string> settings;

  std::string to_json() const;
};

std::string toolkit_version();

struct IngestOptions {
  SegmentOptions segmenting;
  std::uint64_t seed = 0;
  /// Game ids to ingest; empty means every game with a config.
  std::vector<std::string> games;
};

struct GameIngestStats {
  std::size_t levels = 0;
  std::size_t windows = 0;
  std::size_t unique = 0;
  std::size_t unsolvable = 0;
  std::size_t final_count = 0;
};

struct IngestResult {
  Corpus corpus;
  /// For each corpus segment, the index of the segment it was copied from by
  /// oversampling, or -1 for originals.
  std::vector<long> copy_of;
  std::map<std::string, GameIngestStats> stats;
  std::vector<std::string> level_files;
};

/// Loads `<games_dir>/<id>.json`, `<physics_dir>/<ref>.json` and every `*.txt`
/// under `<levels_dir>/<id>/` (sorted by name), then segments, deduplicates per
/// game, annotates with the game's agent (dropping unsolvable windows) and
/// oversamples to equal counts.
IngestResult ingest_corpus(const std::filesystem::path& games_dir, const std::filesystem::path& physics_dir,
                           const std::filesystem::path& levels_dir, const IngestOptions& options);

/// Writes segments/NNNNN.txt, paths/NNNNN.path, manifest.csv
/// (`id,game,source_level,offset,file,path_file,copy_of`) and, when given, run.json.
void write_corpus_archive(const std::filesystem::path& dir, const IngestResult& result,
                          const RunManifest* manifest = nullptr);

struct CorpusArchive {
  Corpus corpus;
  std::vector<long> copy_of;
};

CorpusArchive read_corpus_archive(const std::filesystem::path& dir);

}  // namespace levelblend
