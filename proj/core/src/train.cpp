#include "levelblend/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "json.hpp"

namespace levelblend {

void TrainConfig::validate() const {
  model.validate();
  if (epochs < 0) throw Error("epochs must be non-negative");
  if (!(learning_rate > 0.0)) throw Error("learning rate must be positive");
  if (!(lr_final_fraction > 0.0 && lr_final_fraction <= 1.0)) throw Error("final learning rate fraction must be in (0, 1]");
  if (kl_target < 0.0 || kl_anneal_epochs < 0) throw Error("KL schedule must be non-negative");
  if (batch_size < 1) throw Error("batch size must be positive");
  if (grad_clip < 0.0) throw Error("gradient clip must be non-negative");
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"linear-paper", "gru-paper", "desk"};
  return names;
}

TrainConfig preset_config(std::string_view preset, ModelKind kind, std::optional<int> latent) {
  TrainConfig c;
  c.preset = std::string(preset);
  if (preset == "linear-paper") {
    c.model.kind = ModelKind::kLinear;
    c.model.latent = 32;
    c.model.hidden = {1024, 512, 256};
    c.epochs = 5000;
    c.learning_rate = 1e-3;
    c.kl_target = 1.0;
    c.kl_anneal_epochs = 0;
    c.batch_size = 32;
  } else if (preset == "gru-paper") {
    c.model.kind = ModelKind::kGru;
    c.model.latent = 32;
    c.model.encoder_layers = 3;
    c.model.encoder_hidden = 1024;
    c.model.decoder_layers = 2;
    c.model.decoder_hidden = 256;
    c.model.dropout = 0.5;
    c.epochs = 50;
    c.learning_rate = 1e-5;
    c.kl_target = 0.05;
    c.kl_anneal_epochs = 5;
    c.batch_size = 32;
  } else if (preset == "desk") {
    c.model.kind = kind;
    c.model.latent = 8;
    if (kind == ModelKind::kLinear) {
      c.model.hidden = {512, 256, 128};
      c.epochs = 300;
      c.learning_rate = 6e-4;
      c.lr_final_fraction = 0.05;
      c.kl_target = 1.0;
      c.kl_anneal_epochs = 0;
      c.batch_size = 10;
    } else {
      c.model.encoder_layers = 3;
      c.model.encoder_hidden = 64;
      c.model.decoder_layers = 2;
      c.model.decoder_hidden = 32;
      c.model.dropout = 0.1;
      c.epochs = 50;
      c.learning_rate = 3e-3;
      c.kl_target = 0.05;
      c.kl_anneal_epochs = 5;
      c.batch_size = 5;
    }
  } else {
    throw Error(fmt::format("unknown preset '{}'", preset));
  }
  if (latent) c.model.latent = *latent;
  c.validate();
  return c;
}

TrainConfig apply_train_overrides(TrainConfig base, const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(fmt::format("cannot open train config {}", file.string()));
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("{}: {}", file.string(), e.what()));
  }
  try {
    auto& m = base.model;
    if (j.contains("model")) m.kind = parse_model_kind(j.at("model").get<std::string>());
    if (j.contains("latent")) m.latent = j.at("latent").get<int>();
    if (j.contains("vocab")) m.vocab = j.at("vocab").get<int>();
    if (j.contains("hidden")) m.hidden = j.at("hidden").get<std::vector<int>>();
    if (j.contains("encoder_layers")) m.encoder_layers = j.at("encoder_layers").get<int>();
    if (j.contains("encoder_hidden")) m.encoder_hidden = j.at("encoder_hidden").get<int>();
    if (j.contains("decoder_layers")) m.decoder_layers = j.at("decoder_layers").get<int>();
    if (j.contains("decoder_hidden")) m.decoder_hidden = j.at("decoder_hidden").get<int>();
    if (j.contains("dropout")) m.dropout = j.at("dropout").get<double>();
    if (j.contains("epochs")) base.epochs = j.at("epochs").get<int>();
    if (j.contains("learning_rate")) base.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("lr_final_fraction")) base.lr_final_fraction = j.at("lr_final_fraction").get<double>();
    if (j.contains("kl_target")) base.kl_target = j.at("kl_target").get<double>();
    if (j.contains("kl_anneal_epochs")) base.kl_anneal_epochs = j.at("kl_anneal_epochs").get<int>();
    if (j.contains("batch_size")) base.batch_size = j.at("batch_size").get<int>();
    if (j.contains("grad_clip")) base.grad_clip = j.at("grad_clip").get<double>();
    if (j.contains("beta1")) base.adam.beta1 = j.at("beta1").get<double>();
    if (j.contains("beta2")) base.adam.beta2 = j.at("beta2").get<double>();
    if (j.contains("epsilon")) base.adam.epsilon = j.at("epsilon").get<double>();
    if (j.contains("amsgrad")) base.adam.amsgrad = j.at("amsgrad").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("{}: {}", file.string(), e.what()));
  }
  base.validate();
  return base;
}

double learning_rate_at(int epoch, const TrainConfig& config) {
  if (epoch < 0) throw Error("epoch must be non-negative");
  if (config.lr_final_fraction == 1.0 || config.epochs <= 1) return config.learning_rate;
  const double t = std::min(1.0, static_cast<double>(epoch) / (config.epochs - 1));
  return config.learning_rate * (1.0 - (1.0 - config.lr_final_fraction) * t);
}

double kl_weight_at(int epoch, const TrainConfig& config) {
  if (epoch < 0) throw Error("epoch must be non-negative");
  if (config.kl_anneal_epochs == 0) return config.kl_target;
  return config.kl_target * std::min(1.0, static_cast<double>(epoch) / config.kl_anneal_epochs);
}

std::string describe(const TrainConfig& c) {
  const auto& m = c.model;
  std::string arch;
  if (m.kind == ModelKind::kLinear) {
    arch = "hidden";
    for (int h : m.hidden) arch += fmt::format(" {}", h);
  } else {
    arch = fmt::format("encoder {}x{}, decoder {}x{}, dropout {}", m.encoder_layers, m.encoder_hidden,
                       m.decoder_layers, m.decoder_hidden, m.dropout);
  }
  const std::string kl = c.kl_anneal_epochs == 0
                             ? fmt::format("fixed {}", c.kl_target)
                             : fmt::format("0 -> {} over {} epochs", c.kl_target, c.kl_anneal_epochs);
  std::string out = fmt::format(
      "preset: {}\nmodel: {}\nlatent: {}\nvocab: {}\narchitecture: {}\nepochs: {}\nlearning rate: {}\n",
      c.preset.empty() ? "custom" : c.preset, to_string(m.kind), m.latent, m.vocab, arch, c.epochs, c.learning_rate);
  if (c.lr_final_fraction != 1.0) {
    out += fmt::format("learning rate decay: linear to {} at the last epoch\n", c.learning_rate * c.lr_final_fraction);
  }
  out += fmt::format("KL weight: {}\nbatch size: {}\n", kl, c.batch_size);
  if (c.grad_clip > 0.0) out += fmt::format("gradient clip: {}\n", c.grad_clip);
  out += fmt::format("optimizer: {} beta1 {} beta2 {} epsilon {}\n", c.adam.amsgrad ? "amsgrad" : "adam", c.adam.beta1,
                     c.adam.beta2, c.adam.epsilon);
  return out;
}

namespace {

void clip_gradients(ad::ParameterStore& store, double max_norm) {
  double squared = 0.0;
  for (std::size_t i = 0; i < store.size(); ++i) squared += store[i].grad.squaredNorm();
  const double norm = std::sqrt(squared);
  if (norm <= max_norm) return;
  for (std::size_t i = 0; i < store.size(); ++i) store[i].grad *= max_norm / norm;
}

}  // namespace

std::vector<EpochLoss> train(Checkpoint& checkpoint, std::span<const Tokens> data, const TrainConfig& config,
                             const EpochCallback& on_epoch) {
  config.validate();
  if (!checkpoint.model) throw Error("checkpoint has no model");
  if (!(checkpoint.model->config() == config.model)) throw Error("checkpoint architecture differs from the config");
  if (data.empty()) throw Error("training needs a non-empty corpus");
  for (const auto& tokens : data) checkpoint.model->check_tokens(tokens);

  Vae& model = *checkpoint.model;
  auto& store = model.params();
  std::vector<EpochLoss> log;
  std::vector<std::size_t> order(data.size());
  std::vector<Tokens> batch;
  for (auto e = static_cast<int>(checkpoint.epoch); e < config.epochs; ++e) {
    Rng rng = make_rng(checkpoint.seed, "epoch", static_cast<std::uint64_t>(e));
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[uniform_index(rng, i + 1)]);

    EpochLoss row;
    row.epoch = e;
    row.kl_weight = kl_weight_at(e, config);
    const double lr = learning_rate_at(e, config);
    const auto batch_size = static_cast<std::size_t>(config.batch_size);
    int batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += batch_size, ++batch_index) {
      batch.clear();
      for (std::size_t i = start; i < std::min(order.size(), start + batch_size); ++i) batch.push_back(data[order[i]]);
      try {
        ad::Tape tape;
        LossTerms terms = model.objective(tape, batch, row.kl_weight, rng, true);
        ad::Var loss = ad::scale(terms.total, 1.0 / static_cast<double>(batch.size()));
        store.zero_grad();
        tape.backward(loss);
        row.recon_loss += terms.recon.scalar();
        row.kl_loss += terms.kl.scalar();
      } catch (const ad::NonFiniteError& err) {
        throw TrainingError(fmt::format("epoch {}, batch {}: {}", e, batch_index, err.what()), e, batch_index);
      }
      if (config.grad_clip > 0.0) clip_gradients(store, config.grad_clip);
      ad::adam_step(store, checkpoint.adam, lr);
    }
    row.recon_loss /= static_cast<double>(data.size());
    row.kl_loss /= static_cast<double>(data.size());
    checkpoint.epoch = static_cast<std::uint64_t>(e + 1);
    log.push_back(row);
    if (on_epoch) on_epoch(row);
  }
  return log;
}

Checkpoint train_new(std::span<const Tokens> data, const TrainConfig& config, std::vector<EpochLoss>* log,
                     const EpochCallback& on_epoch) {
  Checkpoint c = make_checkpoint(config.model, config.seed, config.adam);
  auto rows = train(c, data, config, on_epoch);
  if (log) *log = std::move(rows);
  return c;
}

std::string loss_csv(std::span<const EpochLoss> log) {
  std::string out = "epoch,recon_loss,kl_loss,kl_weight\n";
  for (const auto& r : log) out += fmt::format("{},{:.10g},{:.10g},{:.10g}\n", r.epoch, r.recon_loss, r.kl_loss, r.kl_weight);
  return out;
}

}  // namespace levelblend
