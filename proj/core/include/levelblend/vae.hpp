#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "levelblend/autodiff.hpp"
#include "levelblend/grid.hpp"
#include "levelblend/nn.hpp"
#include "levelblend/random.hpp"

namespace levelblend {

enum class ModelKind : std::uint32_t { kLinear = 0, kGru = 1 };

std::string to_string(ModelKind kind);
/// Accepts "linear" and "gru".
ModelKind parse_model_kind(std::string_view text);

/// Architecture of either VAE variant. Grids are rows x cols tokens over a
/// vocab_size-channel alphabet; only the first min(vocab, 16) channels are ever
/// produced by decoding.
struct ModelConfig {
  ModelKind kind = ModelKind::kLinear;
  int latent = 32;
  int vocab = 16;
  int rows = kSegmentRows;
  int cols = kSegmentCols;
  /// Linear encoder widths; the decoder uses them in reverse.
  std::vector<int> hidden = {1024, 512, 256};
  int encoder_layers = 3;
  int encoder_hidden = 1024;
  int decoder_layers = 2;
  int decoder_hidden = 256;
  /// Between stacked recurrent layers, training only.
  double dropout = 0.5;

  int cells() const { return rows * cols; }
  int legal_channels() const;
  /// Throws on non-positive sizes or a vocab below the tile alphabet for 15x32 grids.
  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

/// Channel index per cell, row-major.
using Tokens = std::vector<int>;

Tokens tokens_from_segment(const Segment& segment, int vocab_size);
/// Builds a 15x32 segment from row-major channel ids. Generated segments carry
/// path tiles, so the result is marked annotated.
Segment segment_from_tokens(std::span<const int> tokens, const std::string& game);

/// Posterior mean and log-variance for one input.
struct Posterior {
  std::vector<double> mean;
  std::vector<double> logvar;
};

struct LossTerms {
  ad::Var recon;
  ad::Var kl;
  ad::Var total;
};

/// Summed per-cell cross-entropy of `logits` (one row per cell) against the
/// targets, plus kl_weight times KL(N(mean, exp(logvar)) || N(0, I)).
LossTerms vae_loss(ad::Var logits, std::span<const int> targets, ad::Var mean, ad::Var logvar, double kl_weight);

class Vae {
 public:
  virtual ~Vae() = default;
  Vae(const Vae&) = delete;
  Vae& operator=(const Vae&) = delete;

  const ModelConfig& config() const { return config_; }
  ad::ParameterStore& params() { return params_; }
  const ad::ParameterStore& params() const { return params_; }
  void initialize(std::uint64_t seed) { ad::initialize_uniform(params_, seed); }

  /// Posterior parameters, B x latent each. Dropout applies only when
  /// `dropout_rng` is given.
  virtual std::pair<ad::Var, ad::Var> encode(ad::Tape& tape, std::span<const Tokens> batch,
                                             Rng* dropout_rng) const = 0;
  /// Loss summed over the batch. Reparameterization noise comes from `rng`;
  /// dropout is active only when `training` is set.
  virtual LossTerms objective(ad::Tape& tape, std::span<const Tokens> batch, double kl_weight, Rng& rng,
                              bool training) const = 0;
  /// Deterministic decode of a latent: argmax for the linear model, greedy
  /// autoregressive decoding for the recurrent one.
  virtual Tokens decode_greedy(std::span<const double> z) const = 0;
  /// Decode used for generation: argmax for the linear model, lowest-perplexity
  /// of ten seeded samples for the recurrent one.
  virtual Tokens generate(std::span<const double> z, std::uint64_t seed) const = 0;

  /// Eval-mode posterior of one input.
  Posterior encode(const Tokens& tokens) const;
  void check_tokens(const Tokens& tokens) const;

 protected:
  explicit Vae(ModelConfig config);

  ModelConfig config_;
  ad::ParameterStore params_;
};

class LinearVae final : public Vae {
 public:
  explicit LinearVae(ModelConfig config);

  std::pair<ad::Var, ad::Var> encode(ad::Tape& tape, std::span<const Tokens> batch, Rng* dropout_rng) const override;
  LossTerms objective(ad::Tape& tape, std::span<const Tokens> batch, double kl_weight, Rng& rng,
                      bool training) const override;
  Tokens decode_greedy(std::span<const double> z) const override;
  Tokens generate(std::span<const double> z, std::uint64_t seed) const override;
  using Vae::encode;

  /// B x (cells * vocab) logits for a B x latent input.
  ad::Var decode(ad::Tape& tape, ad::Var z) const;
  /// cells x vocab logits for one latent.
  ad::Matrix decode_logits(std::span<const double> z) const;

 private:
  std::vector<ad::Dense> encoder_;
  ad::Dense head_;
  std::vector<ad::Dense> decoder_;
};

struct Sample {
  Tokens tokens;
  double perplexity = 0.0;
};

struct BestOfK {
  Tokens tokens;
  double perplexity = 0.0;
  int index = 0;
  /// Perplexity of every draw, in draw order.
  std::vector<double> perplexities;
};

class GruVae final : public Vae {
 public:
  static constexpr int kDefaultSamples = 10;

  explicit GruVae(ModelConfig config);

  std::pair<ad::Var, ad::Var> encode(ad::Tape& tape, std::span<const Tokens> batch, Rng* dropout_rng) const override;
  LossTerms objective(ad::Tape& tape, std::span<const Tokens> batch, double kl_weight, Rng& rng,
                      bool training) const override;
  Tokens decode_greedy(std::span<const double> z) const override;
  Tokens generate(std::span<const double> z, std::uint64_t seed) const override;
  using Vae::encode;

  /// Autoregressive sample at `temperature`. Perplexity is exp of the mean
  /// per-token negative log-likelihood under the untempered model.
  Sample sample(std::span<const double> z, double temperature, std::uint64_t seed) const;
  /// Draw `draw` of a best-of-k run with the same seed, decoded on its own.
  Sample sample_draw(std::span<const double> z, double temperature, std::uint64_t seed, int draw) const;
  /// Draws k samples (draw i seeded from (seed, i)) and keeps the lowest
  /// perplexity, ties to the earlier draw. k = 1 equals sample().
  BestOfK sample_best_of_k(std::span<const double> z, int k, std::uint64_t seed, double temperature = 1.0) const;
  /// Perplexity of a given token grid under teacher forcing.
  double sequence_perplexity(std::span<const double> z, const Tokens& tokens) const;

  /// Linearized position t holds grid cell order()[t] (column-major, top-to-bottom).
  const std::vector<int>& order() const { return order_; }
  int start_token() const { return config_.vocab; }

 private:
  struct Runner;
  enum class Pick { kGreedy, kSample, kForced };
  std::vector<Sample> run_decoder(std::span<const double> z, int draws, int first_draw, Pick pick,
                                  double temperature, std::uint64_t seed, const Tokens* forced) const;

  std::vector<int> order_;
  std::vector<ad::GruLayer> encoder_;
  ad::Dense mean_head_;
  ad::Dense logvar_head_;
  std::vector<ad::Dense> init_;
  std::vector<ad::GruLayer> decoder_;
  ad::Dense out_;
};

std::unique_ptr<Vae> make_model(const ModelConfig& config);

/// Share of cells that decode_greedy(posterior mean) restores, in [0, 1].
double reconstruction_accuracy(const Vae& model, std::span<const Tokens> data);

}  // namespace levelblend
