#include <fmt/format.h>

#include "levelblend/vae.hpp"

namespace levelblend {
namespace {

ad::Matrix gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  ad::Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = standard_normal(rng);
  return m;
}

}  // namespace

LinearVae::LinearVae(ModelConfig config) : Vae(std::move(config)) {
  const auto& c = config_;
  Eigen::Index in = static_cast<Eigen::Index>(c.cells()) * c.vocab;
  for (std::size_t i = 0; i < c.hidden.size(); ++i) {
    encoder_.push_back(ad::make_dense(params_, fmt::format("enc.{}", i), in, c.hidden[i]));
    in = c.hidden[i];
  }
  head_ = ad::make_dense(params_, "enc.head", in, 2 * c.latent);
  Eigen::Index from = c.latent;
  for (std::size_t i = c.hidden.size(); i-- > 0;) {
    decoder_.push_back(ad::make_dense(params_, fmt::format("dec.{}", c.hidden.size() - 1 - i), from, c.hidden[i]));
    from = c.hidden[i];
  }
  decoder_.push_back(ad::make_dense(params_, "dec.out", from, static_cast<Eigen::Index>(c.cells()) * c.vocab));
}

std::pair<ad::Var, ad::Var> LinearVae::encode(ad::Tape& tape, std::span<const Tokens> batch, Rng*) const {
  const int cells = config_.cells(), vocab = config_.vocab;
  // One-hot rows times the first weight matrix, as a gather of its rows.
  std::vector<int> ids;
  ids.reserve(batch.size() * static_cast<std::size_t>(cells));
  for (const auto& tokens : batch) {
    check_tokens(tokens);
    for (int c = 0; c < cells; ++c) ids.push_back(c * vocab + tokens[static_cast<std::size_t>(c)]);
  }
  const auto& first = encoder_.front();
  ad::Var h = ad::relu(ad::embed_sum(ids, cells, tape.param(*first.w), tape.param(*first.b)));
  for (std::size_t i = 1; i < encoder_.size(); ++i) h = ad::relu(encoder_[i](tape, h));
  ad::Var stats = head_(tape, h);
  return {ad::slice_cols(stats, 0, config_.latent), ad::slice_cols(stats, config_.latent, config_.latent)};
}

ad::Var LinearVae::decode(ad::Tape& tape, ad::Var z) const {
  ad::Var h = z;
  for (std::size_t i = 0; i + 1 < decoder_.size(); ++i) h = ad::relu(decoder_[i](tape, h));
  return decoder_.back()(tape, h);
}

LossTerms LinearVae::objective(ad::Tape& tape, std::span<const Tokens> batch, double kl_weight, Rng& rng,
                               bool) const {
  auto [mean, logvar] = encode(tape, batch, nullptr);
  ad::Var z = ad::reparameterize(mean, logvar, gaussian(rng, mean.rows(), mean.cols()));
  ad::Var logits = decode(tape, z);
  logits = ad::reshape(logits, logits.rows() * config_.cells(), config_.vocab);
  std::vector<int> targets;
  targets.reserve(batch.size() * static_cast<std::size_t>(config_.cells()));
  for (const auto& tokens : batch) targets.insert(targets.end(), tokens.begin(), tokens.end());
  return vae_loss(logits, targets, mean, logvar, kl_weight);
}

ad::Matrix LinearVae::decode_logits(std::span<const double> z) const {
  if (z.size() != static_cast<std::size_t>(config_.latent)) {
    throw Error(fmt::format("latent has {} values, model expects {}", z.size(), config_.latent));
  }
  ad::Tape tape(false);
  ad::Var logits = decode(tape, tape.constant(Eigen::Map<const ad::Matrix>(z.data(), 1, config_.latent)));
  return Eigen::Map<const ad::Matrix>(logits.value().data(), config_.cells(), config_.vocab);
}

Tokens LinearVae::decode_greedy(std::span<const double> z) const {
  const ad::Matrix logits = decode_logits(z);
  const int legal = config_.legal_channels();
  Tokens out(static_cast<std::size_t>(config_.cells()));
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    int best = 0;
    for (int k = 1; k < legal; ++k) {
      if (logits(r, k) > logits(r, best)) best = k;
    }
    out[static_cast<std::size_t>(r)] = best;
  }
  return out;
}

Tokens LinearVae::generate(std::span<const double> z, std::uint64_t) const { return decode_greedy(z); }

}  // namespace levelblend
