#include <cmath>

#include <fmt/format.h>

#include "levelblend/vae.hpp"

namespace levelblend {

using ad::Matrix;

namespace {

Matrix gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = standard_normal(rng);
  return m;
}

}  // namespace

// Inference-only forward pass on plain matrices. Each output row is computed on
// its own with a fixed summation order, so a row's result does not depend on
// how many rows are decoded together.
struct GruVae::Runner {
  static void affine_rows(const Matrix& x, const ad::Parameter& w, const ad::Parameter& b, Matrix& out) {
    out.resize(x.rows(), w.value.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      auto row = out.row(r);
      row = b.value.row(0);
      for (Eigen::Index i = 0; i < x.cols(); ++i) row += x(r, i) * w.value.row(i);
    }
  }

  static void cell(const Matrix& gi, const Matrix& gh, Matrix& h) {
    const Eigen::Index H = h.cols();
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
      for (Eigen::Index j = 0; j < H; ++j) {
        const double rg = 1.0 / (1.0 + std::exp(-(gi(r, j) + gh(r, j))));
        const double zg = 1.0 / (1.0 + std::exp(-(gi(r, H + j) + gh(r, H + j))));
        const double n = std::tanh(gi(r, 2 * H + j) + rg * gh(r, 2 * H + j));
        h(r, j) = n + zg * (h(r, j) - n);
      }
    }
  }
};

GruVae::GruVae(ModelConfig config) : Vae(std::move(config)) {
  const auto& c = config_;
  order_.resize(static_cast<std::size_t>(c.cells()));
  for (int t = 0; t < c.cells(); ++t) order_[static_cast<std::size_t>(t)] = (t % c.rows) * c.cols + t / c.rows;

  for (int l = 0; l < c.encoder_layers; ++l) {
    const Eigen::Index in = l == 0 ? c.vocab : c.encoder_hidden;
    encoder_.push_back(ad::make_gru(params_, fmt::format("enc.gru{}", l), in, c.encoder_hidden));
  }
  mean_head_ = ad::make_dense(params_, "enc.mean", c.encoder_hidden, c.latent);
  logvar_head_ = ad::make_dense(params_, "enc.logvar", c.encoder_hidden, c.latent);
  for (int l = 0; l < c.decoder_layers; ++l) {
    init_.push_back(ad::make_dense(params_, fmt::format("dec.init{}", l), c.latent, c.decoder_hidden));
  }
  for (int l = 0; l < c.decoder_layers; ++l) {
    // Layer 0 reads the previous token, with one extra row for the start token.
    const Eigen::Index in = l == 0 ? c.vocab + 1 : c.decoder_hidden;
    decoder_.push_back(ad::make_gru(params_, fmt::format("dec.gru{}", l), in, c.decoder_hidden));
  }
  out_ = ad::make_dense(params_, "dec.out", c.decoder_hidden, c.vocab);
}

std::pair<ad::Var, ad::Var> GruVae::encode(ad::Tape& tape, std::span<const Tokens> batch, Rng* dropout_rng) const {
  for (const auto& tokens : batch) check_tokens(tokens);
  const auto B = static_cast<Eigen::Index>(batch.size());
  std::vector<ad::Var> h;
  for (std::size_t l = 0; l < encoder_.size(); ++l) h.push_back(tape.constant(Matrix::Zero(B, config_.encoder_hidden)));
  std::vector<int> ids(batch.size());
  for (const int cell : order_) {
    for (std::size_t b = 0; b < batch.size(); ++b) ids[b] = batch[b][static_cast<std::size_t>(cell)];
    h[0] = encoder_[0].step_tokens(tape, ids, h[0]);
    for (std::size_t l = 1; l < encoder_.size(); ++l) {
      ad::Var x = dropout_rng ? ad::dropout(h[l - 1], config_.dropout, *dropout_rng) : h[l - 1];
      h[l] = encoder_[l].step(tape, x, h[l]);
    }
  }
  return {mean_head_(tape, h.back()), logvar_head_(tape, h.back())};
}

LossTerms GruVae::objective(ad::Tape& tape, std::span<const Tokens> batch, double kl_weight, Rng& rng,
                            bool training) const {
  if (kl_weight < 0.0) throw Error("kl_weight must be non-negative");
  Rng* drop = training ? &rng : nullptr;
  auto [mean, logvar] = encode(tape, batch, drop);
  ad::Var z = ad::reparameterize(mean, logvar, gaussian(rng, mean.rows(), mean.cols()));

  std::vector<ad::Var> h;
  for (const auto& init : init_) h.push_back(ad::tanh(init(tape, z)));
  std::vector<int> prev(batch.size(), start_token());
  std::vector<int> target(batch.size());
  ad::Var recon;
  for (std::size_t t = 0; t < order_.size(); ++t) {
    h[0] = decoder_[0].step_tokens(tape, prev, h[0]);
    for (std::size_t l = 1; l < decoder_.size(); ++l) {
      ad::Var x = drop ? ad::dropout(h[l - 1], config_.dropout, *drop) : h[l - 1];
      h[l] = decoder_[l].step(tape, x, h[l]);
    }
    for (std::size_t b = 0; b < batch.size(); ++b) target[b] = batch[b][static_cast<std::size_t>(order_[t])];
    ad::Var ce = ad::cross_entropy(out_(tape, h.back()), target);
    recon = t == 0 ? ce : ad::add(recon, ce);
    prev = target;
  }
  LossTerms terms;
  terms.recon = recon;
  terms.kl = ad::kl_standard_normal(mean, logvar);
  terms.total = ad::add(terms.recon, ad::scale(terms.kl, kl_weight));
  return terms;
}

std::vector<Sample> GruVae::run_decoder(std::span<const double> z, int draws, int first_draw, Pick pick,
                                        double temperature, std::uint64_t seed, const Tokens* forced) const {
  if (z.size() != static_cast<std::size_t>(config_.latent)) {
    throw Error(fmt::format("latent has {} values, model expects {}", z.size(), config_.latent));
  }
  const Matrix zrow = Eigen::Map<const Matrix>(z.data(), 1, config_.latent);
  const auto rows = static_cast<Eigen::Index>(draws);
  std::vector<Matrix> h(decoder_.size());
  Matrix tmp;
  for (std::size_t l = 0; l < decoder_.size(); ++l) {
    Runner::affine_rows(zrow, *init_[l].w, *init_[l].b, tmp);
    h[l] = tmp.array().tanh().matrix().replicate(rows, 1);
  }
  std::vector<Rng> rngs;
  for (int d = 0; d < draws; ++d) rngs.push_back(make_rng(seed, "sample", static_cast<std::uint64_t>(first_draw + d)));

  const int legal = config_.legal_channels();
  std::vector<Sample> out(static_cast<std::size_t>(draws));
  for (auto& s : out) s.tokens.assign(order_.size(), 0);
  std::vector<double> nll(static_cast<std::size_t>(draws), 0.0);
  std::vector<int> prev(static_cast<std::size_t>(draws), start_token());
  std::vector<double> weights(static_cast<std::size_t>(legal));
  Matrix gi, gh, logits;

  for (const int cell : order_) {
    const auto& l0 = decoder_[0];
    gi.resize(rows, l0.w_ih->value.cols());
    for (Eigen::Index r = 0; r < rows; ++r) {
      gi.row(r) = l0.w_ih->value.row(prev[static_cast<std::size_t>(r)]) + l0.b_ih->value.row(0);
    }
    Runner::affine_rows(h[0], *l0.w_hh, *l0.b_hh, gh);
    Runner::cell(gi, gh, h[0]);
    for (std::size_t l = 1; l < decoder_.size(); ++l) {
      Runner::affine_rows(h[l - 1], *decoder_[l].w_ih, *decoder_[l].b_ih, gi);
      Runner::affine_rows(h[l], *decoder_[l].w_hh, *decoder_[l].b_hh, gh);
      Runner::cell(gi, gh, h[l]);
    }
    Runner::affine_rows(h.back(), *out_.w, *out_.b, logits);

    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto d = static_cast<std::size_t>(r);
      const auto row = logits.row(r);
      int tok = 0;
      if (pick == Pick::kForced) {
        tok = (*forced)[static_cast<std::size_t>(cell)];
      } else if (pick == Pick::kGreedy) {
        for (int k = 1; k < legal; ++k) {
          if (row(k) > row(tok)) tok = k;
        }
      } else {
        double top = row(0);
        for (int k = 1; k < legal; ++k) top = std::max(top, row(k));
        double total = 0.0;
        for (int k = 0; k < legal; ++k) total += weights[static_cast<std::size_t>(k)] = std::exp((row(k) - top) / temperature);
        double u = uniform01(rngs[d]) * total;
        tok = legal - 1;
        for (int k = 0; k < legal; ++k) {
          u -= weights[static_cast<std::size_t>(k)];
          if (u < 0.0) {
            tok = k;
            break;
          }
        }
      }
      const double top = row.maxCoeff();
      const double lse = top + std::log((row.array() - top).exp().sum());
      nll[d] += lse - row(tok);
      out[d].tokens[static_cast<std::size_t>(cell)] = tok;
      prev[d] = tok;
    }
  }
  for (std::size_t d = 0; d < out.size(); ++d) {
    out[d].perplexity = std::exp(nll[d] / static_cast<double>(order_.size()));
  }
  return out;
}

Tokens GruVae::decode_greedy(std::span<const double> z) const {
  return run_decoder(z, 1, 0, Pick::kGreedy, 1.0, 0, nullptr).front().tokens;
}

Sample GruVae::sample(std::span<const double> z, double temperature, std::uint64_t seed) const {
  if (!(temperature > 0.0)) throw Error("temperature must be positive");
  return run_decoder(z, 1, 0, Pick::kSample, temperature, seed, nullptr).front();
}

Sample GruVae::sample_draw(std::span<const double> z, double temperature, std::uint64_t seed, int draw) const {
  if (!(temperature > 0.0)) throw Error("temperature must be positive");
  if (draw < 0) throw Error("draw index must be non-negative");
  return run_decoder(z, 1, draw, Pick::kSample, temperature, seed, nullptr).front();
}

BestOfK GruVae::sample_best_of_k(std::span<const double> z, int k, std::uint64_t seed, double temperature) const {
  if (k < 1) throw Error("best-of-k needs k >= 1");
  if (!(temperature > 0.0)) throw Error("temperature must be positive");
  auto draws = run_decoder(z, k, 0, Pick::kSample, temperature, seed, nullptr);
  BestOfK best;
  for (int i = 0; i < k; ++i) {
    const double p = draws[static_cast<std::size_t>(i)].perplexity;
    best.perplexities.push_back(p);
    if (i == 0 || p < best.perplexity) {
      best.perplexity = p;
      best.index = i;
    }
  }
  best.tokens = std::move(draws[static_cast<std::size_t>(best.index)].tokens);
  return best;
}

double GruVae::sequence_perplexity(std::span<const double> z, const Tokens& tokens) const {
  check_tokens(tokens);
  return run_decoder(z, 1, 0, Pick::kForced, 1.0, 0, &tokens).front().perplexity;
}

Tokens GruVae::generate(std::span<const double> z, std::uint64_t seed) const {
  return sample_best_of_k(z, kDefaultSamples, seed).tokens;
}

}  // namespace levelblend
