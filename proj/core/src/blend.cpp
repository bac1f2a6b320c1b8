#include "levelblend/blend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "levelblend/frechet.hpp"
#include "levelblend/pathing.hpp"
#include "levelblend/random.hpp"

namespace levelblend {

LatentCode interpolate(const LatentCode& a, const LatentCode& b, double alpha) {
  if (a.values.size() != b.values.size()) {
    throw Error(fmt::format("cannot interpolate latents of length {} and {}", a.values.size(), b.values.size()));
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(fmt::format("alpha {} outside [0, 1]", alpha));
  LatentCode out;
  out.provenance = fmt::format("{}*{} + {}*{}", 1.0 - alpha, a.provenance, alpha, b.provenance);
  out.values.resize(a.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) out.values[i] = (1.0 - alpha) * a.values[i] + alpha * b.values[i];
  return out;
}

LatentCode encode_latent(const Vae& model, const Segment& segment) {
  return {model.encode(tokens_from_segment(segment, model.config().vocab)).mean, segment.game};
}

Segment decode_latent(const Vae& model, const LatentCode& code, std::uint64_t seed, const std::string& game) {
  return segment_from_tokens(model.generate(code.values, seed), game);
}

Segment reconstruct(const Vae& model, const Segment& segment, std::uint64_t seed) {
  return decode_latent(model, encode_latent(model, segment), seed, segment.game);
}

BlendSpec mirrored(const BlendSpec& spec) { return {spec.game_b, spec.seg_b, spec.game_a, spec.seg_a, 1.0 - spec.alpha}; }

std::uint64_t blend_seed(std::uint64_t base, const BlendSpec& spec) {
  BlendSpec c = spec;
  const auto a = std::tie(spec.game_a, spec.seg_a);
  const auto b = std::tie(spec.game_b, spec.seg_b);
  if (b < a) c = mirrored(spec);
  if (a == b) c.alpha = std::min(spec.alpha, 1.0 - spec.alpha);
  return derive_seed(base, fmt::format("blend:{}:{}|{}:{}|{:.17g}", c.game_a, c.seg_a, c.game_b, c.seg_b, c.alpha));
}

Segment blend_generate(const Vae& model, const Segment& a, const Segment& b, double alpha, std::uint64_t seed) {
  const LatentCode z = interpolate(encode_latent(model, a), encode_latent(model, b), alpha);
  const std::string game = a.game == b.game ? a.game : a.game + "+" + b.game;
  return decode_latent(model, z, seed, game);
}

GameLatentDistribution fit_game_latent(const Vae& model, std::span<const Segment> segments, const std::string& game) {
  std::vector<std::vector<double>> codes;
  for (const auto& s : segments) {
    if (s.game == game) codes.push_back(encode_latent(model, s).values);
  }
  if (codes.size() < 2) {
    throw Error(fmt::format("game {} needs at least 2 segments to fit a latent distribution, has {}", game,
                            codes.size()));
  }
  const std::size_t z = codes.front().size();
  const double n = static_cast<double>(codes.size());
  GameLatentDistribution d;
  d.game_id = game;
  d.mean.assign(z, 0.0);
  d.variance.assign(z, 0.0);
  for (const auto& c : codes) {
    for (std::size_t i = 0; i < z; ++i) d.mean[i] += c[i];
  }
  for (auto& m : d.mean) m /= n;
  for (const auto& c : codes) {
    for (std::size_t i = 0; i < z; ++i) d.variance[i] += (c[i] - d.mean[i]) * (c[i] - d.mean[i]);
  }
  for (auto& v : d.variance) v /= n;
  return d;
}

LatentCode draw_latent(const GameLatentDistribution& dist, Rng& rng) {
  LatentCode code;
  code.provenance = "N(" + dist.game_id + ")";
  code.values.resize(dist.mean.size());
  for (std::size_t i = 0; i < dist.mean.size(); ++i) {
    code.values[i] = dist.mean[i] + std::sqrt(dist.variance[i] + kVarianceFloor) * standard_normal(rng);
  }
  return code;
}

Segment conditional_sample(const Vae& model, const GameLatentDistribution& dist, std::uint64_t seed) {
  Rng rng = make_rng(seed, "conditional");
  return decode_latent(model, draw_latent(dist, rng), derive_seed(seed, "conditional-decode"), dist.game_id);
}

std::vector<Segment> generate_batch(const Vae& model, int n, std::uint64_t seed) {
  if (n < 1) throw Error("generate_batch needs n >= 1");
  std::vector<Segment> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto index = static_cast<std::uint64_t>(i);
    Rng rng = make_rng(seed, "prior", index);
    LatentCode z;
    z.provenance = "prior";
    z.values.resize(static_cast<std::size_t>(model.config().latent));
    for (auto& v : z.values) v = standard_normal(rng);
    out.push_back(decode_latent(model, z, derive_seed(seed, "prior-decode", index), "generated"));
  }
  return out;
}

Selection select_segments(std::span<const Segment> segments, const std::vector<std::string>& games, int per_domain,
                          std::uint64_t seed) {
  if (per_domain < 1) throw Error("per_domain must be positive");
  Selection out;
  for (const auto& g : games) {
    std::vector<const Segment*> pool;
    std::unordered_set<std::string> seen;
    for (const auto& s : segments) {
      if (s.game == g && seen.insert(std::string(s.grid.cells())).second) pool.push_back(&s);
    }
    if (pool.size() < static_cast<std::size_t>(per_domain)) {
      throw Error(fmt::format("game {} has {} distinct segments, {} requested", g, pool.size(), per_domain));
    }
    Rng rng = make_rng(seed, "select:" + g);
    auto& picked = out[g];
    for (std::size_t i = 0; i < static_cast<std::size_t>(per_domain); ++i) {
      std::swap(pool[i], pool[i + uniform_index(rng, pool.size() - i)]);
      picked.push_back(*pool[i]);
    }
  }
  return out;
}

std::vector<BlendSpec> protocol_specs(const std::vector<std::string>& games, const BlendProtocol& protocol) {
  std::vector<BlendSpec> specs;
  for (const auto& a : games) {
    for (const auto& b : games) {
      for (int i = 0; i < protocol.per_domain; ++i) {
        for (int j = 0; j < protocol.per_domain; ++j) {
          if (protocol.pairing == Pairing::kMatched && i != j) continue;
          for (double alpha : protocol.alphas) specs.push_back({a, i, b, j, alpha});
        }
      }
    }
  }
  return specs;
}

std::pair<double, double> mean_sd(std::vector<double> values) {
  if (values.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  if (values.size() == 1) return {mean, 0.0};
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / (n - 1.0))};
}

BlendReport evaluate_blend(const Vae& model, const Selection& selection, std::span<const BlendSpec> specs,
                           const PhysicsTable& physics, std::uint64_t seed) {
  auto segment_of = [&](const std::string& game, int index) -> const Segment& {
    auto it = selection.find(game);
    if (it == selection.end() || index < 0 || static_cast<std::size_t>(index) >= it->second.size()) {
      throw Error(fmt::format("no selected segment {} for game {}", index, game));
    }
    return it->second[static_cast<std::size_t>(index)];
  };
  for (const auto& spec : specs) {
    for (const auto* g : {&spec.game_a, &spec.game_b}) {
      if (!physics.contains(*g)) throw Error(fmt::format("no physics config for game {}", *g));
    }
  }

  std::map<std::pair<std::string, int>, LatentCode> latents;
  auto latent_of = [&](const std::string& game, int index) -> const LatentCode& {
    auto key = std::make_pair(game, index);
    auto it = latents.find(key);
    if (it == latents.end()) it = latents.emplace(key, encode_latent(model, segment_of(game, index))).first;
    return it->second;
  };

  BlendReport report;
  std::map<std::pair<std::string, std::string>, std::size_t> cell_index;
  std::vector<std::vector<double>> cell_distances;
  for (const auto& spec : specs) {
    BlendRecord rec;
    rec.spec = spec;
    rec.seed = blend_seed(seed, spec);
    const LatentCode z = interpolate(latent_of(spec.game_a, spec.seg_a), latent_of(spec.game_b, spec.seg_b), spec.alpha);
    const std::string label = spec.game_a == spec.game_b ? spec.game_a : spec.game_a + "+" + spec.game_b;
    rec.segment = decode_latent(model, z, rec.seed, label);
    rec.generated_path = extract_generated_path(rec.segment);
    const Segment stripped = strip_path(rec.segment);

    const std::set<std::string> agents = {spec.game_a, spec.game_b};
    for (const auto& g : agents) {
      AgentOutcome out;
      out.game = g;
      if (auto path = find_path(stripped.grid, physics.at(g))) {
        out.solved = true;
        out.agent_path = std::move(path->points);
        if (!rec.generated_path.empty()) {
          out.has_distance = true;
          out.frechet = discrete_frechet(rec.generated_path, out.agent_path);
        }
      }
      rec.agents.push_back(std::move(out));
    }

    const auto key = std::make_pair(spec.game_a, spec.game_b);
    auto [it, inserted] = cell_index.emplace(key, report.cells.size());
    if (inserted) {
      BlendCell cell;
      cell.game_a = spec.game_a;
      cell.game_b = spec.game_b;
      report.cells.push_back(cell);
      cell_distances.emplace_back();
    }
    BlendCell& cell = report.cells[it->second];
    for (const auto& a : rec.agents) {
      ++cell.attempts;
      if (!a.solved) ++cell.failures;
      if (a.has_distance) cell_distances[it->second].push_back(a.frechet);
    }
    report.records.push_back(std::move(rec));
  }
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    auto& cell = report.cells[i];
    cell.distances = cell_distances[i].size();
    std::tie(cell.mean_frechet, cell.sd_frechet) = mean_sd(cell_distances[i]);
    cell.failure_rate = cell.attempts == 0 ? 0.0 : 100.0 * static_cast<double>(cell.failures) / static_cast<double>(cell.attempts);
  }
  return report;
}

std::string model_label(const ModelConfig& config) {
  return fmt::format("{}-{}", config.kind == ModelKind::kLinear ? "LIN" : "GRU", config.latent);
}

std::vector<TileReportRow> tile_report(std::span<const Segment> generated, std::span<const Segment> reference,
                                       const std::vector<std::string>& games, int resamples, std::uint64_t seed) {
  const auto gen = feature_vectors(generated);
  std::vector<TileReportRow> rows;
  auto add_row = [&](const std::string& domain, const std::vector<FeatureVector>& ref) {
    const auto result = permutation_test(gen, ref, resamples, derive_seed(seed, "tiles:" + domain));
    rows.push_back({domain, result.observed, result.p_value, ref.size()});
  };
  add_row("ALL", feature_vectors(reference));
  for (const auto& g : games) {
    std::vector<FeatureVector> ref;
    for (const auto& s : reference) {
      if (s.game == g) ref.push_back(feature_vector(s));
    }
    if (ref.empty()) throw Error(fmt::format("reference corpus has no segments of {}", g));
    add_row(g, ref);
  }
  return rows;
}

std::string tile_report_csv(const std::string& model, std::span<const TileReportRow> rows) {
  std::string header = "model,metric";
  std::string dist = model + ",e_distance";
  std::string pval = model + ",p_value";
  for (const auto& r : rows) {
    header += "," + r.domain;
    dist += fmt::format(",{:.6f}", r.e_distance);
    pval += fmt::format(",{:.6f}", r.p_value);
  }
  return header + "\n" + dist + "\n" + pval + "\n";
}

namespace {

std::string format_optional(double v) { return std::isnan(v) ? std::string() : fmt::format("{:.6f}", v); }

}  // namespace

std::string path_report_csv(const std::string& model, const BlendReport& report,
                            const std::vector<std::string>& games) {
  std::string out = "model,game,mean_frechet,sd_frechet,failure_rate\n";
  auto row = [&](const std::string& name, auto&& uses) {
    std::vector<double> d;
    std::size_t attempts = 0, failures = 0;
    for (const auto& rec : report.records) {
      if (!uses(rec.spec)) continue;
      for (const auto& a : rec.agents) {
        ++attempts;
        if (!a.solved) ++failures;
        if (a.has_distance) d.push_back(a.frechet);
      }
    }
    const auto [mean, sd] = mean_sd(std::move(d));
    const double rate = attempts == 0 ? 0.0 : 100.0 * static_cast<double>(failures) / static_cast<double>(attempts);
    out += fmt::format("{},{},{},{},{:.6f}\n", model, name, format_optional(mean), format_optional(sd), rate);
  };
  for (const auto& g : games) row(g, [&](const BlendSpec& s) { return s.game_a == g || s.game_b == g; });
  row("ALL", [](const BlendSpec&) { return true; });
  return out;
}

std::string blend_table_csv(const std::string& model, const BlendReport& report) {
  std::string out = "model,game_a,game_b,mean_frechet,sd_frechet,failure_rate\n";
  for (const auto& c : report.cells) {
    out += fmt::format("{},{},{},{},{},{:.6f}\n", model, c.game_a, c.game_b, format_optional(c.mean_frechet),
                       format_optional(c.sd_frechet), c.failure_rate);
  }
  return out;
}

std::string blend_file_name(const BlendSpec& spec) {
  return fmt::format("{}-{:02d}_{}-{:02d}_a{:.2f}.txt", spec.game_a, spec.seg_a, spec.game_b, spec.seg_b, spec.alpha);
}

std::string blend_manifest_csv(std::span<const BlendRecord> records) {
  std::string out = "game_a,seg_a,game_b,seg_b,alpha,seed,output_file\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{:.2f},{},{}\n", r.spec.game_a, r.spec.seg_a, r.spec.game_b, r.spec.seg_b,
                       r.spec.alpha, r.seed, blend_file_name(r.spec));
  }
  return out;
}

std::string metric_summary_csv(const std::map<std::string, std::vector<FeatureVector>>& sources) {
  std::string out = "source,n";
  for (const char* name : {"density", "nonlinearity", "leniency", "interestingness", "path_proportion"}) {
    out += fmt::format(",{0}_mean,{0}_sd", name);
  }
  out += "\n";
  for (const auto& [name, vectors] : sources) {
    out += fmt::format("{},{}", name, vectors.size());
    for (std::size_t k = 0; k < 5; ++k) {
      std::vector<double> column;
      for (const auto& v : vectors) column.push_back(v.values()[k]);
      const auto [mean, sd] = mean_sd(std::move(column));
      out += fmt::format(",{},{}", format_optional(mean), format_optional(sd));
    }
    out += "\n";
  }
  return out;
}

}  // namespace levelblend
