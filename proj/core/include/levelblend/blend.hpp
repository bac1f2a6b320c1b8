#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "levelblend/corpus.hpp"
#include "levelblend/metrics.hpp"
#include "levelblend/physics.hpp"
#include "levelblend/vae.hpp"

namespace levelblend {

struct LatentCode {
  std::vector<double> values;
  /// Game id of an encoded segment, or a description of how the code was made.
  std::string provenance;
};

/// (1 - alpha) a + alpha b, component-wise. Throws on a length mismatch or alpha
/// outside [0, 1].
LatentCode interpolate(const LatentCode& a, const LatentCode& b, double alpha);

/// Posterior mean of the segment.
LatentCode encode_latent(const Vae& model, const Segment& segment);
/// model.generate() of the code, as a segment labelled `game`.
Segment decode_latent(const Vae& model, const LatentCode& code, std::uint64_t seed, const std::string& game);
/// decode_latent(encode_latent(segment)).
Segment reconstruct(const Vae& model, const Segment& segment, std::uint64_t seed);

/// One interpolation: segment `seg_a` of game_a's selection blended with
/// `seg_b` of game_b's, alpha being the share of b.
struct BlendSpec {
  std::string game_a;
  int seg_a = 0;
  std::string game_b;
  int seg_b = 0;
  double alpha = 0.0;

  bool operator==(const BlendSpec&) const = default;
};

/// The same blend seen from the other endpoint: (b, a, 1 - alpha).
BlendSpec mirrored(const BlendSpec& spec);
/// Seed of a blend, identical for a spec and its mirror.
std::uint64_t blend_seed(std::uint64_t base, const BlendSpec& spec);
/// Encodes both endpoints, interpolates and decodes.
Segment blend_generate(const Vae& model, const Segment& a, const Segment& b, double alpha, std::uint64_t seed);

struct GameLatentDistribution {
  std::string game_id;
  std::vector<double> mean;
  /// Population variance (divisor n) per component.
  std::vector<double> variance;
};

inline constexpr double kVarianceFloor = 1e-8;

/// Throws when the game has fewer than two segments.
GameLatentDistribution fit_game_latent(const Vae& model, std::span<const Segment> segments, const std::string& game);
/// z ~ N(mean, diag(variance + floor)).
LatentCode draw_latent(const GameLatentDistribution& dist, Rng& rng);
Segment conditional_sample(const Vae& model, const GameLatentDistribution& dist, std::uint64_t seed);

/// n segments decoded from N(0, I) draws; draw i uses streams derived from (seed, i).
std::vector<Segment> generate_batch(const Vae& model, int n, std::uint64_t seed);

enum class Pairing { kCross, kMatched };

struct BlendProtocol {
  int per_domain = 10;
  std::vector<double> alphas = {0.0, 0.25, 0.5, 0.75, 1.0};
  /// Cross: all per_domain^2 pairs per ordered game pair. Matched: i with i.
  Pairing pairing = Pairing::kCross;
};

using Selection = std::map<std::string, std::vector<Segment>>;

/// per_domain distinct segments of each game, drawn without replacement.
Selection select_segments(std::span<const Segment> segments, const std::vector<std::string>& games,
                          int per_domain, std::uint64_t seed);
/// Every ordered game pair, the diagonal included, times the pairing, times the alphas.
std::vector<BlendSpec> protocol_specs(const std::vector<std::string>& games, const BlendProtocol& protocol);

struct AgentOutcome {
  std::string game;
  bool solved = false;
  /// Set when the agent solved the segment and the segment carries a generated path.
  bool has_distance = false;
  double frechet = 0.0;
  std::vector<Point> agent_path;
};

struct BlendRecord {
  BlendSpec spec;
  std::uint64_t seed = 0;
  Segment segment;
  std::vector<Point> generated_path;
  std::vector<AgentOutcome> agents;
};

struct BlendCell {
  std::string game_a;
  std::string game_b;
  double mean_frechet = 0.0;
  double sd_frechet = 0.0;
  double failure_rate = 0.0;
  std::size_t attempts = 0;
  std::size_t failures = 0;
  std::size_t distances = 0;
};

struct BlendReport {
  std::vector<BlendRecord> records;
  /// One cell per ordered (game_a, game_b), in order of first appearance.
  std::vector<BlendCell> cells;
};

using PhysicsTable = std::map<std::string, JumpPhysics>;

/// Generates every spec and runs the agent of each component game on the
/// segment with path tiles stripped. Distances between the generated path and
/// each successful agent path are aggregated per cell; failed agents only count
/// toward the failure rate.
BlendReport evaluate_blend(const Vae& model, const Selection& selection, std::span<const BlendSpec> specs,
                           const PhysicsTable& physics, std::uint64_t seed);

/// Mean and sample standard deviation of distances summed in ascending order.
std::pair<double, double> mean_sd(std::vector<double> values);

/// "LIN-8", "GRU-32", ...
std::string model_label(const ModelConfig& config);

struct TileReportRow {
  std::string domain;  // "ALL" or a game id
  double e_distance = 0.0;
  double p_value = 1.0;
  std::size_t reference_count = 0;
};

/// E-distance and permutation p-value of the generated features against the
/// reference corpus as a whole and against each game.
std::vector<TileReportRow> tile_report(std::span<const Segment> generated, std::span<const Segment> reference,
                                       const std::vector<std::string>& games, int resamples, std::uint64_t seed);

/// `model,metric,<domain>...` with an e_distance row and a p_value row.
std::string tile_report_csv(const std::string& model, std::span<const TileReportRow> rows);
/// `model,game,mean_frechet,sd_frechet,failure_rate`: per domain over every
/// blend that uses it, then an ALL row.
std::string path_report_csv(const std::string& model, const BlendReport& report,
                            const std::vector<std::string>& games);
/// `model,game_a,game_b,mean_frechet,sd_frechet,failure_rate`.
std::string blend_table_csv(const std::string& model, const BlendReport& report);
/// Relative file name of a blend's segment, e.g. "CV-03_MM-07_a0.25.txt".
std::string blend_file_name(const BlendSpec& spec);
/// `game_a,seg_a,game_b,seg_b,alpha,seed,output_file`.
std::string blend_manifest_csv(std::span<const BlendRecord> records);

/// Per-source mean and standard deviation of the five metrics:
/// `source,n,density_mean,density_sd,...,path_proportion_sd`.
std::string metric_summary_csv(const std::map<std::string, std::vector<FeatureVector>>& sources);

}  // namespace levelblend
