#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "levelblend/adam.hpp"
#include "levelblend/vae.hpp"

namespace levelblend {

/// A model with its optimizer state and training position.
struct Checkpoint {
  std::unique_ptr<Vae> model;
  ad::AdamState adam;
  std::uint64_t seed = 0;
  /// Completed training epochs.
  std::uint64_t epoch = 0;
};

inline constexpr std::uint32_t kCheckpointVersion = 2;

/// Fresh checkpoint: parameters drawn from the seed, zeroed moments, epoch 0.
Checkpoint make_checkpoint(const ModelConfig& config, std::uint64_t seed, ad::AdamConfig adam = {});

/// Little-endian binary container: magic "LVLBLND\0", version, model kind and
/// architecture, seed, epoch, Adam step and hyperparameters, then named tensors
/// (u32 name length, name, u32 rank, u64 dims, f64 values). Adam moments are
/// stored as "adam.m/<name>" and "adam.v/<name>", plus "adam.vmax/<name>"
/// when the amsgrad flag is set.
std::string serialize_checkpoint(const Checkpoint& checkpoint);
Checkpoint deserialize_checkpoint(std::string_view bytes);

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& file);
Checkpoint load_checkpoint(const std::filesystem::path& file);

}  // namespace levelblend
