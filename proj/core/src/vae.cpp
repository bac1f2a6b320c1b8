#include "levelblend/vae.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "levelblend/tiles.hpp"

namespace levelblend {

std::string to_string(ModelKind kind) { return kind == ModelKind::kLinear ? "linear" : "gru"; }

ModelKind parse_model_kind(std::string_view text) {
  if (text == "linear") return ModelKind::kLinear;
  if (text == "gru") return ModelKind::kGru;
  throw Error(fmt::format("unknown model kind '{}' (expected linear or gru)", text));
}

int ModelConfig::legal_channels() const { return std::min(vocab, tiles::kSymbolCount); }

void ModelConfig::validate() const {
  if (latent < 1 || vocab < 2 || rows < 1 || cols < 1) throw Error("model sizes must be positive");
  if (rows == kSegmentRows && cols == kSegmentCols && vocab < tiles::kSymbolCount) {
    throw Error(fmt::format("vocab {} cannot hold the {} tile symbols", vocab, tiles::kSymbolCount));
  }
  if (kind == ModelKind::kLinear) {
    if (hidden.empty()) throw Error("linear model needs at least one hidden layer");
    for (int h : hidden) {
      if (h < 1) throw Error("hidden widths must be positive");
    }
  } else {
    if (encoder_layers < 1 || encoder_hidden < 1 || decoder_layers < 1 || decoder_hidden < 1) {
      throw Error("recurrent layer sizes must be positive");
    }
    if (dropout < 0.0 || dropout >= 1.0) throw Error("dropout must be in [0, 1)");
  }
}

Tokens tokens_from_segment(const Segment& segment, int vocab_size) {
  const auto cells = segment.grid.cells();
  Tokens out;
  out.reserve(cells.size());
  for (char c : cells) {
    const auto idx = tiles::index_of(c);
    if (!idx || *idx >= vocab_size) throw Error(fmt::format("symbol '{}' outside a vocab of {}", c, vocab_size));
    out.push_back(*idx);
  }
  return out;
}

Segment segment_from_tokens(std::span<const int> tokens, const std::string& game) {
  if (tokens.size() != static_cast<std::size_t>(kSegmentCells)) {
    throw Error(fmt::format("expected {} tokens, got {}", kSegmentCells, tokens.size()));
  }
  TileGrid grid(kSegmentRows, kSegmentCols, tiles::kBackground);
  for (int r = 0; r < kSegmentRows; ++r) {
    for (int c = 0; c < kSegmentCols; ++c) grid.at(r, c) = tiles::symbol_at(tokens[r * kSegmentCols + c]);
  }
  Segment s(game, std::move(grid));
  s.annotated = true;
  return s;
}

LossTerms vae_loss(ad::Var logits, std::span<const int> targets, ad::Var mean, ad::Var logvar, double kl_weight) {
  if (kl_weight < 0.0) throw Error("kl_weight must be non-negative");
  LossTerms t;
  t.recon = ad::cross_entropy(logits, targets);
  t.kl = ad::kl_standard_normal(mean, logvar);
  t.total = ad::add(t.recon, ad::scale(t.kl, kl_weight));
  return t;
}

Vae::Vae(ModelConfig config) : config_(std::move(config)) { config_.validate(); }

void Vae::check_tokens(const Tokens& tokens) const {
  if (tokens.size() != static_cast<std::size_t>(config_.cells())) {
    throw Error(fmt::format("input has {} tokens, model expects {}", tokens.size(), config_.cells()));
  }
  for (int t : tokens) {
    if (t < 0 || t >= config_.vocab) throw Error(fmt::format("token {} outside vocab {}", t, config_.vocab));
  }
}

Posterior Vae::encode(const Tokens& tokens) const {
  ad::Tape tape(false);
  auto [mean, logvar] = encode(tape, std::span<const Tokens>(&tokens, 1), nullptr);
  Posterior p;
  p.mean.assign(mean.value().data(), mean.value().data() + mean.value().size());
  p.logvar.assign(logvar.value().data(), logvar.value().data() + logvar.value().size());
  return p;
}

std::unique_ptr<Vae> make_model(const ModelConfig& config) {
  if (config.kind == ModelKind::kLinear) return std::make_unique<LinearVae>(config);
  return std::make_unique<GruVae>(config);
}

double reconstruction_accuracy(const Vae& model, std::span<const Tokens> data) {
  if (data.empty()) throw Error("reconstruction accuracy of an empty set");
  std::size_t hits = 0, total = 0;
  for (const auto& tokens : data) {
    const Posterior p = model.encode(tokens);
    const Tokens out = model.decode_greedy(p.mean);
    for (std::size_t i = 0; i < tokens.size(); ++i) hits += out[i] == tokens[i] ? 1 : 0;
    total += tokens.size();
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace levelblend
