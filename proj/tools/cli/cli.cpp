#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "levelblend/archive.hpp"
#include "levelblend/blend.hpp"
#include "levelblend/checkpoint.hpp"
#include "levelblend/io.hpp"
#include "levelblend/metrics.hpp"
#include "levelblend/pathing.hpp"
#include "levelblend/render.hpp"
#include "levelblend/train.hpp"

#ifndef LEVELBLEND_DEFAULT_DATA_DIR
#define LEVELBLEND_DEFAULT_DATA_DIR "data"
#endif

namespace levelblend::cli {
namespace fs = std::filesystem;
namespace {

struct Global {
  std::uint64_t seed = 0;
  std::string out;
  std::string data = LEVELBLEND_DEFAULT_DATA_DIR;
};

struct IngestArgs {
  std::string games_dir, physics_dir, levels_dir;
  int stride = 1;
  std::vector<std::string> games;
};

struct TrainArgs {
  std::string corpus = "corpus";
  std::string preset = "desk";
  std::string model;
  std::optional<int> latent;
  std::optional<int> epochs;
  std::vector<std::string> configs;
  bool dry_run = false;
};

struct ModelArgs {
  std::string checkpoint;
  std::string model;
};

struct GenerateArgs {
  ModelArgs m;
  int n = 100;
  std::string game;
  std::string corpus;
  int scale = 4;
  bool no_render = false;
};

struct InterpolateArgs {
  ModelArgs m;
  std::string corpus = "corpus";
  std::vector<std::string> pairs;
  std::vector<double> alphas = {0.0, 0.25, 0.5, 0.75, 1.0};
  int scale = 4;
};

struct EvalArgs {
  ModelArgs m;
  std::string corpus = "corpus";
  std::string generated;
  int n = 1000;
  int resamples = 100;
  bool tiles = false;
  bool paths = false;
  int per_domain = 10;
  std::string pairing = "cross";
  std::vector<double> alphas = {0.0, 0.25, 0.5, 0.75, 1.0};
};

struct RenderArgs {
  std::vector<std::string> files;
  int scale = 8;
};

fs::path out_dir(const Global& g, const char* fallback) { return g.out.empty() ? fs::path(fallback) : fs::path(g.out); }

std::string output_name(const Global& g, const char* fallback) { return g.out.empty() ? fallback : g.out; }

PhysicsTable load_physics_table(const fs::path& data, const std::vector<std::string>& games) {
  PhysicsTable table;
  for (const auto& game : games) {
    const auto config = load_game_config(data / "games", game);
    table.emplace(game, load_physics(data / "physics", config.physics_ref));
  }
  return table;
}

/// Corpus segments that are not oversampled copies.
std::vector<Segment> originals(const CorpusArchive& archive) {
  std::vector<Segment> out;
  for (std::size_t i = 0; i < archive.corpus.segments.size(); ++i) {
    if (archive.copy_of[i] < 0) out.push_back(archive.corpus.segments[i]);
  }
  return out;
}

std::vector<std::string> games_present(std::span<const Segment> segments) {
  std::set<std::string> seen;
  for (const auto& s : segments) seen.insert(s.game);
  std::vector<std::string> out;
  for (const auto& g : kGameIds) {
    if (seen.contains(g)) out.push_back(g);
  }
  for (const auto& g : seen) {
    if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
  }
  return out;
}

Checkpoint open_checkpoint(const ModelArgs& m) {
  if (m.checkpoint.empty()) throw Error("--checkpoint is required");
  Checkpoint ckpt = load_checkpoint(m.checkpoint);
  if (!m.model.empty() && parse_model_kind(m.model) != ckpt.model->config().kind) {
    throw Error(fmt::format("{} holds a {} model, not {}", m.checkpoint, to_string(ckpt.model->config().kind),
                            m.model));
  }
  return ckpt;
}

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (const auto& i : items) s += (s.empty() ? "" : ",") + i;
  return s;
}

std::string alpha_list(const std::vector<double>& alphas) {
  std::string s;
  for (double a : alphas) s += (s.empty() ? "" : ",") + fmt::format("{:.2f}", a);
  return s;
}

std::vector<Segment> read_generated(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir / "segments")) {
    if (e.path().extension() == ".txt") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(fmt::format("no generated segments under {}", (dir / "segments").string()));
  std::vector<Segment> out;
  for (const auto& f : files) {
    Segment s("generated", grid_from_text(read_file(f)));
    s.annotated = true;
    s.validate();
    out.push_back(std::move(s));
  }
  return out;
}

int cmd_ingest(const Global& g, const IngestArgs& a, std::ostream& out, std::ostream& err) {
  const fs::path data = g.data;
  const fs::path games_dir = a.games_dir.empty() ? data / "games" : fs::path(a.games_dir);
  const fs::path physics_dir = a.physics_dir.empty() ? data / "physics" : fs::path(a.physics_dir);
  const fs::path levels_dir = a.levels_dir.empty() ? data / "levels" : fs::path(a.levels_dir);
  IngestOptions opts;
  opts.segmenting.stride = a.stride;
  opts.seed = derive_seed(g.seed, "ingest");
  opts.games = a.games;
  const IngestResult result = ingest_corpus(games_dir, physics_dir, levels_dir, opts);

  RunManifest manifest;
  manifest.command = "ingest";
  manifest.config_paths = {games_dir.string(), physics_dir.string()};
  manifest.seed = g.seed;
  manifest.inputs = result.level_files;
  manifest.output = output_name(g, "corpus");
  manifest.settings = {{"stride", std::to_string(a.stride)}, {"games", join(opts.games.empty() ? kGameIds : opts.games)}};
  write_corpus_archive(out_dir(g, "corpus"), result, &manifest);

  out << fmt::format("{:<6}{:>8}{:>9}{:>8}{:>12}{:>8}\n", "game", "levels", "windows", "unique", "unsolvable", "final");
  std::size_t unsolvable = 0;
  for (const auto& [game, s] : result.stats) {
    out << fmt::format("{:<6}{:>8}{:>9}{:>8}{:>12}{:>8}\n", game, s.levels, s.windows, s.unique, s.unsolvable,
                       s.final_count);
    unsolvable += s.unsolvable;
  }
  out << fmt::format("wrote {} segments to {}\n", result.corpus.segments.size(), manifest.output);
  if (unsolvable > 0) err << fmt::format("warning: excluded {} unsolvable segments\n", unsolvable);
  return 0;
}

int cmd_train(const Global& g, const TrainArgs& a, std::ostream& out, std::ostream& err) {
  const ModelKind kind = a.model.empty() ? ModelKind::kLinear : parse_model_kind(a.model);
  TrainConfig cfg = preset_config(a.preset, kind, a.latent);
  if (!a.model.empty() && cfg.model.kind != kind) {
    throw Error(fmt::format("preset {} trains a {} model", a.preset, to_string(cfg.model.kind)));
  }
  for (const auto& c : a.configs) cfg = apply_train_overrides(cfg, c);
  if (a.epochs) cfg.epochs = *a.epochs;
  cfg.seed = g.seed;
  cfg.validate();
  out << describe(cfg);
  if (a.dry_run) return 0;

  const CorpusArchive archive = read_corpus_archive(a.corpus);
  std::vector<Tokens> data;
  data.reserve(archive.corpus.segments.size());
  for (const auto& s : archive.corpus.segments) data.push_back(tokens_from_segment(s, cfg.model.vocab));

  const int every = std::max(1, cfg.epochs / 10);
  std::vector<EpochLoss> log;
  Checkpoint ckpt = train_new(data, cfg, &log, [&](const EpochLoss& e) {
    if ((e.epoch + 1) % every == 0 || e.epoch + 1 == cfg.epochs) {
      err << fmt::format("epoch {:>5}  recon {:.4f}  kl {:.4f}  w {:.3f}\n", e.epoch + 1, e.recon_loss, e.kl_loss,
                         e.kl_weight);
    }
  });

  const fs::path dir = out_dir(g, "run");
  save_checkpoint(ckpt, dir / "checkpoint.lvb");
  write_file(dir / "loss.csv", loss_csv(log));
  const double acc = reconstruction_accuracy(*ckpt.model, data);

  RunManifest manifest;
  manifest.command = "train";
  manifest.config_paths = a.configs;
  manifest.seed = g.seed;
  manifest.inputs = {a.corpus};
  manifest.output = output_name(g, "run");
  manifest.settings = {{"preset", cfg.preset},
                       {"model", to_string(cfg.model.kind)},
                       {"latent", std::to_string(cfg.model.latent)},
                       {"epochs", std::to_string(cfg.epochs)},
                       {"reconstruction_accuracy", fmt::format("{:.6f}", acc)}};
  write_file(dir / "run.json", manifest.to_json());
  out << fmt::format("reconstruction accuracy {:.2f}%\n", 100.0 * acc);
  out << fmt::format("wrote {}\n", (fs::path(manifest.output) / "checkpoint.lvb").string());
  return 0;
}

void write_segment_files(const fs::path& dir, const std::string& stem, const Segment& s, int scale, bool render) {
  write_file(dir / "segments" / (stem + ".txt"), to_text(s.grid));
  if (render) write_file(dir / "renders" / (stem + ".ppm"), render_ppm(s.grid, scale));
}

int cmd_generate(const Global& g, const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  if (a.n < 1) throw Error("--n must be at least 1");
  const Checkpoint ckpt = open_checkpoint(a.m);
  const Vae& model = *ckpt.model;
  const std::uint64_t base = derive_seed(g.seed, "generate");
  std::vector<Segment> segments;
  if (a.game.empty()) {
    segments = generate_batch(model, a.n, base);
  } else {
    if (a.corpus.empty()) throw Error("--game needs --corpus");
    const auto pool = originals(read_corpus_archive(a.corpus));
    const auto dist = fit_game_latent(model, pool, a.game);
    for (int i = 0; i < a.n; ++i) {
      segments.push_back(conditional_sample(model, dist, derive_seed(base, "conditional", static_cast<std::uint64_t>(i))));
    }
  }

  const fs::path dir = out_dir(g, "generated");
  fs::remove_all(dir / "segments");
  fs::remove_all(dir / "renders");
  std::string csv = "id,game,file,unsolvable_by\n";
  std::size_t unsolvable = 0;
  std::vector<std::string> games = kGameIds;
  const PhysicsTable physics = load_physics_table(g.data, games);
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const std::string stem = fmt::format("{:05d}", i);
    write_segment_files(dir, stem, segments[i], a.scale, !a.no_render);
    // Agents that cannot traverse the generated segment, as a warning count.
    const Segment stripped = strip_path(segments[i]);
    std::vector<std::string> failed;
    for (const auto& [game, p] : physics) {
      if (!a.game.empty() && game != a.game) continue;
      if (!find_path(stripped.grid, p)) failed.push_back(game);
    }
    if (!failed.empty()) ++unsolvable;
    std::string by;
    for (const auto& f : failed) by += (by.empty() ? "" : ";") + f;
    csv += fmt::format("{},{},segments/{}.txt,{}\n", stem, segments[i].game, stem, by);
  }
  write_file(dir / "manifest.csv", csv);

  RunManifest manifest;
  manifest.command = "generate";
  manifest.seed = g.seed;
  manifest.inputs = {a.m.checkpoint};
  if (!a.corpus.empty()) manifest.inputs.push_back(a.corpus);
  manifest.output = output_name(g, "generated");
  manifest.settings = {{"n", std::to_string(a.n)}, {"game", a.game.empty() ? "prior" : a.game},
                       {"model", model_label(model.config())}};
  write_file(dir / "run.json", manifest.to_json());
  out << fmt::format("wrote {} segments to {}\n", segments.size(), manifest.output);
  if (unsolvable > 0) err << fmt::format("warning: {} segments not traversable by at least one agent\n", unsolvable);
  return 0;
}

BlendSpec parse_pair(const std::string& text) {
  // GAME:INDEX,GAME:INDEX
  auto endpoint = [&](const std::string& part) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) throw Error(fmt::format("bad pair endpoint '{}', want GAME:INDEX", part));
    return std::make_pair(part.substr(0, colon), std::stoi(part.substr(colon + 1)));
  };
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw Error(fmt::format("bad pair '{}', want GAME:INDEX,GAME:INDEX", text));
  const auto [ga, ia] = endpoint(text.substr(0, comma));
  const auto [gb, ib] = endpoint(text.substr(comma + 1));
  return {ga, ia, gb, ib, 0.0};
}

int cmd_interpolate(const Global& g, const InterpolateArgs& a, std::ostream& out, std::ostream&) {
  const Checkpoint ckpt = open_checkpoint(a.m);
  const Vae& model = *ckpt.model;
  const auto pool = originals(read_corpus_archive(a.corpus));
  const auto games = games_present(pool);
  const std::uint64_t base = derive_seed(g.seed, "interpolate");

  std::vector<BlendSpec> pairs;
  Selection selection;
  if (a.pairs.empty()) {
    selection = select_segments(pool, games, 1, base);
    for (const auto& ga : games) {
      for (const auto& gb : games) {
        if (ga != gb) pairs.push_back({ga, 0, gb, 0, 0.0});
      }
    }
  } else {
    for (const auto& game : games) {
      for (const auto& s : pool) {
        if (s.game == game) selection[game].push_back(s);
      }
    }
    for (const auto& p : a.pairs) pairs.push_back(parse_pair(p));
  }
  auto segment_of = [&](const std::string& game, int index) -> const Segment& {
    auto it = selection.find(game);
    if (it == selection.end() || index < 0 || static_cast<std::size_t>(index) >= it->second.size()) {
      throw Error(fmt::format("game {} has no segment {}", game, index));
    }
    return it->second[static_cast<std::size_t>(index)];
  };

  const fs::path dir = out_dir(g, "interpolations");
  fs::remove_all(dir / "segments");
  fs::remove_all(dir / "renders");
  std::vector<BlendRecord> records;
  for (const auto& pair : pairs) {
    const Segment& sa = segment_of(pair.game_a, pair.seg_a);
    const Segment& sb = segment_of(pair.game_b, pair.seg_b);
    std::vector<TileGrid> frames;
    for (double alpha : a.alphas) {
      BlendSpec spec = pair;
      spec.alpha = alpha;
      BlendRecord rec;
      rec.spec = spec;
      rec.seed = blend_seed(base, spec);
      rec.segment = blend_generate(model, sa, sb, alpha, rec.seed);
      const std::string stem = blend_file_name(spec).substr(0, blend_file_name(spec).size() - 4);
      write_segment_files(dir, stem, rec.segment, a.scale, true);
      frames.push_back(rec.segment.grid);
      records.push_back(std::move(rec));
    }
    const std::string strip = fmt::format("{}-{:02d}_{}-{:02d}_strip.ppm", pair.game_a, pair.seg_a, pair.game_b,
                                          pair.seg_b);
    write_file(dir / "renders" / strip, render_strip_ppm(frames, a.scale));
  }
  write_file(dir / "blend_manifest.csv", blend_manifest_csv(records));

  RunManifest manifest;
  manifest.command = "interpolate";
  manifest.seed = g.seed;
  manifest.inputs = {a.m.checkpoint, a.corpus};
  manifest.output = output_name(g, "interpolations");
  manifest.settings = {{"alphas", alpha_list(a.alphas)}, {"pairs", std::to_string(pairs.size())}};
  write_file(dir / "run.json", manifest.to_json());
  out << fmt::format("wrote {} blends ({} pairs x {} alphas) to {}\n", records.size(), pairs.size(), a.alphas.size(),
                     manifest.output);
  return 0;
}

int cmd_eval(const Global& g, const EvalArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.tiles && !a.paths) throw Error("eval needs --tiles and/or --paths");
  const Checkpoint ckpt = open_checkpoint(a.m);
  const Vae& model = *ckpt.model;
  const std::string label = model_label(model.config());
  const auto pool = originals(read_corpus_archive(a.corpus));
  const auto games = games_present(pool);
  const fs::path dir = out_dir(g, "reports");
  const std::uint64_t base = derive_seed(g.seed, "eval");

  RunManifest manifest;
  manifest.command = "eval";
  manifest.seed = g.seed;
  manifest.inputs = {a.m.checkpoint, a.corpus};
  manifest.output = output_name(g, "reports");
  manifest.settings["model"] = label;

  if (a.tiles) {
    std::vector<Segment> generated;
    if (!a.generated.empty()) {
      generated = read_generated(a.generated);
      manifest.inputs.push_back(a.generated);
    } else {
      generated = generate_batch(model, a.n, derive_seed(base, "generate"));
    }
    const auto rows = tile_report(generated, pool, games, a.resamples, derive_seed(base, "tiles"));
    write_file(dir / "tiles.csv", tile_report_csv(label, rows));
    std::map<std::string, std::vector<FeatureVector>> sources;
    sources["generated"] = feature_vectors(generated);
    for (const auto& s : pool) sources["corpus:" + s.game].push_back(feature_vector(s));
    write_file(dir / "metrics.csv", metric_summary_csv(sources));
    manifest.settings["generated"] = std::to_string(generated.size());
    manifest.settings["resamples"] = std::to_string(a.resamples);
    for (const auto& r : rows) {
      out << fmt::format("{:<5} e-distance {:.4f}  p {:.4f}\n", r.domain, r.e_distance, r.p_value);
    }
  }

  if (a.paths) {
    BlendProtocol protocol;
    protocol.per_domain = a.per_domain;
    protocol.alphas = a.alphas;
    if (a.pairing == "cross") {
      protocol.pairing = Pairing::kCross;
    } else if (a.pairing == "matched") {
      protocol.pairing = Pairing::kMatched;
    } else {
      throw Error(fmt::format("unknown pairing '{}'", a.pairing));
    }
    const Selection selection = select_segments(pool, games, a.per_domain, derive_seed(base, "select"));
    const auto specs = protocol_specs(games, protocol);
    const BlendReport report = evaluate_blend(model, selection, specs, load_physics_table(g.data, games),
                                              derive_seed(base, "blend"));
    write_file(dir / "paths.csv", path_report_csv(label, report, games));
    write_file(dir / "blends.csv", blend_table_csv(label, report));
    write_file(dir / "blend_manifest.csv", blend_manifest_csv(report.records));
    fs::remove_all(dir / "blends");
    std::size_t failures = 0;
    for (const auto& r : report.records) {
      write_file(dir / "blends" / blend_file_name(r.spec), to_text(r.segment.grid));
      for (const auto& ag : r.agents) failures += ag.solved ? 0 : 1;
    }
    manifest.settings["per_domain"] = std::to_string(a.per_domain);
    manifest.settings["pairing"] = a.pairing;
    manifest.settings["alphas"] = alpha_list(a.alphas);
    manifest.settings["blends"] = std::to_string(report.records.size());
    out << fmt::format("evaluated {} blends over {} cells\n", report.records.size(), report.cells.size());
    if (failures > 0) err << fmt::format("warning: {} agent runs failed to traverse a blend\n", failures);
  }
  write_file(dir / "run.json", manifest.to_json());
  return 0;
}

int cmd_render(const Global& g, const RenderArgs& a, std::ostream& out) {
  const fs::path dir = out_dir(g, ".");
  for (const auto& f : a.files) {
    const TileGrid grid = grid_from_text(read_file(f));
    out << f << "\n" << render_ascii(grid) << "\n";
    if (!g.out.empty()) write_file(dir / (fs::path(f).stem().string() + ".ppm"), render_ppm(grid, a.scale));
  }
  return 0;
}

void add_model_args(CLI::App* cmd, ModelArgs& m) {
  cmd->add_option("--checkpoint", m.checkpoint, "Checkpoint written by train")->required();
  cmd->add_option("--model", m.model, "Expected model kind (linear|gru)")->check(CLI::IsMember({"linear", "gru"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-game platformer level corpus, VAE training and blending toolkit", "levelblend"};
  app.require_subcommand(1);
  app.set_version_flag("--version", toolkit_version());
  Global g;
  auto add_global = [&](CLI::App* cmd) {
    cmd->add_option("--seed", g.seed, "Top-level seed; every random stream derives from it");
    cmd->add_option("--out", g.out, "Output directory");
    cmd->add_option("--data", g.data, "Directory holding games/, physics/ and levels/");
  };

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Segment, deduplicate, annotate and oversample level files");
  add_global(c_ingest);
  c_ingest->add_option("--games-dir", ingest.games_dir, "Game config directory (default <data>/games)");
  c_ingest->add_option("--physics-dir", ingest.physics_dir, "Physics config directory (default <data>/physics)");
  c_ingest->add_option("--levels-dir", ingest.levels_dir, "Level directory (default <data>/levels)");
  c_ingest->add_option("--stride", ingest.stride, "Window stride")->check(CLI::PositiveNumber);
  c_ingest->add_option("--game", ingest.games, "Restrict to these game ids");

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "Train a VAE on a corpus archive");
  add_global(c_train);
  c_train->add_option("--corpus", train.corpus, "Corpus archive directory");
  c_train->add_option("--preset", train.preset, "linear-paper | gru-paper | desk")
      ->check(CLI::IsMember(preset_names()));
  c_train->add_option("--model", train.model, "linear | gru")->check(CLI::IsMember({"linear", "gru"}));
  c_train->add_option("--latent", train.latent, "Latent size")->check(CLI::IsMember({8, 32, 64, 128, 256}));
  c_train->add_option("--epochs", train.epochs, "Override the preset's epoch count")->check(CLI::PositiveNumber);
  c_train->add_option("--config", train.configs, "JSON overrides applied after the preset");
  c_train->add_flag("--dry-run", train.dry_run, "Print the resolved configuration and stop");

  GenerateArgs gen;
  auto* c_gen = app.add_subcommand("generate", "Decode segments from the prior or a game's latent distribution");
  add_global(c_gen);
  add_model_args(c_gen, gen.m);
  c_gen->add_option("-n,--n", gen.n, "Number of segments");
  c_gen->add_option("--game", gen.game, "Sample from this game's latent distribution");
  c_gen->add_option("--corpus", gen.corpus, "Corpus archive (for --game)");
  c_gen->add_option("--scale", gen.scale, "Pixels per tile in renders")->check(CLI::PositiveNumber);
  c_gen->add_flag("--no-render", gen.no_render, "Skip PPM renders");

  InterpolateArgs interp;
  auto* c_interp = app.add_subcommand("interpolate", "Blend segment pairs across latent space");
  add_global(c_interp);
  add_model_args(c_interp, interp.m);
  c_interp->add_option("--corpus", interp.corpus, "Corpus archive directory");
  c_interp->add_option("--pair", interp.pairs, "GAME:INDEX,GAME:INDEX (index into the game's corpus segments)");
  c_interp->add_option("--alphas", interp.alphas, "Blend weights of the second segment")->delimiter(',');
  c_interp->add_option("--scale", interp.scale, "Pixels per tile in renders")->check(CLI::PositiveNumber);

  EvalArgs ev;
  auto* c_eval = app.add_subcommand("eval", "Tile-metric and agent-path evaluation reports");
  add_global(c_eval);
  add_model_args(c_eval, ev.m);
  c_eval->add_option("--corpus", ev.corpus, "Corpus archive directory");
  c_eval->add_flag("--tiles", ev.tiles, "E-distance report of generated segments against the corpus");
  c_eval->add_flag("--paths", ev.paths, "Blend protocol with agent Frechet distances");
  c_eval->add_option("--generated", ev.generated, "Directory written by generate (default: sample --n)");
  c_eval->add_option("-n,--n", ev.n, "Prior samples when --generated is absent")->check(CLI::PositiveNumber);
  c_eval->add_option("--resamples", ev.resamples, "Permutation test resamples")->check(CLI::PositiveNumber);
  c_eval->add_option("--per-domain", ev.per_domain, "Segments selected per game")->check(CLI::PositiveNumber);
  c_eval->add_option("--pairing", ev.pairing, "cross | matched")->check(CLI::IsMember({"cross", "matched"}));
  c_eval->add_option("--alphas", ev.alphas, "Blend weights")->delimiter(',');

  RenderArgs rend;
  auto* c_render = app.add_subcommand("render", "Print segment files and write PPM renders to --out");
  add_global(c_render);
  c_render->add_option("files", rend.files, "Segment text files")->required();
  c_render->add_option("--scale", rend.scale, "Pixels per tile")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c_ingest) return cmd_ingest(g, ingest, out, err);
    if (*c_train) return cmd_train(g, train, out, err);
    if (*c_gen) return cmd_generate(g, gen, out, err);
    if (*c_interp) return cmd_interpolate(g, interp, out, err);
    if (*c_eval) return cmd_eval(g, ev, out, err);
    if (*c_render) return cmd_render(g, rend, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace levelblend::cli
