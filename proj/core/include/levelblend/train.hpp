#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "levelblend/checkpoint.hpp"
#include "levelblend/vae.hpp"

namespace levelblend {

struct TrainConfig {
  std::string preset;
  ModelConfig model;
  int epochs = 1;
  double learning_rate = 1e-3;
  /// Rate at the last epoch as a fraction of learning_rate, reached linearly. 1 keeps it constant.
  double lr_final_fraction = 1.0;
  /// KL weight reached after kl_anneal_epochs; 0 anneal epochs means constant.
  double kl_target = 1.0;
  int kl_anneal_epochs = 0;
  int batch_size = 32;
  /// Largest global L2 norm of a batch gradient; larger ones are scaled down to it. 0 disables.
  double grad_clip = 0.0;
  std::uint64_t seed = 0;
  ad::AdamConfig adam;

  void validate() const;
};

/// "linear-paper", "gru-paper" and "desk". The paper presets fix the model kind;
/// "desk" is a reduced configuration of whichever kind is asked for.
TrainConfig preset_config(std::string_view preset, ModelKind kind = ModelKind::kLinear,
                          std::optional<int> latent = std::nullopt);
const std::vector<std::string>& preset_names();

/// Applies the keys of a JSON file on top of `base`: model, latent, vocab,
/// hidden, encoder_layers, encoder_hidden, decoder_layers, decoder_hidden,
/// dropout, epochs, learning_rate, lr_final_fraction, kl_target, kl_anneal_epochs, batch_size, grad_clip,
/// beta1, beta2, epsilon.
TrainConfig apply_train_overrides(TrainConfig base, const std::filesystem::path& file);

/// learning_rate at epoch 0, falling linearly to learning_rate * lr_final_fraction at the last epoch.
double learning_rate_at(int epoch, const TrainConfig& config);

/// target * min(1, epoch / anneal_epochs).
double kl_weight_at(int epoch, const TrainConfig& config);

/// Human-readable preset summary (kind, latent, epochs, lr, KL schedule, ...).
std::string describe(const TrainConfig& config);

struct EpochLoss {
  int epoch = 0;
  /// Mean per-segment reconstruction cross-entropy over the epoch's batches.
  double recon_loss = 0.0;
  double kl_loss = 0.0;
  double kl_weight = 0.0;
};

/// Non-finite loss or gradient during training.
class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, int epoch, int batch) : Error(what), epoch_(epoch), batch_(batch) {}
  int epoch() const { return epoch_; }
  int batch() const { return batch_; }

 private:
  int epoch_;
  int batch_;
};

using EpochCallback = std::function<void(const EpochLoss&)>;

/// Trains from checkpoint.epoch up to config.epochs. Epoch e shuffles and draws
/// noise from a stream derived from (checkpoint seed, e), so a resumed run
/// repeats the uninterrupted one exactly.
std::vector<EpochLoss> train(Checkpoint& checkpoint, std::span<const Tokens> data, const TrainConfig& config,
                             const EpochCallback& on_epoch = {});

/// Fresh checkpoint from config.seed, trained for config.epochs.
Checkpoint train_new(std::span<const Tokens> data, const TrainConfig& config, std::vector<EpochLoss>* log = nullptr,
                     const EpochCallback& on_epoch = {});

/// `epoch,recon_loss,kl_loss,kl_weight` with a header row.
std::string loss_csv(std::span<const EpochLoss> log);

}  // namespace levelblend
