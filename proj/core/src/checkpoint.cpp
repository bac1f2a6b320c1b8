#include "levelblend/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <map>

#include <fmt/format.h>

#include "levelblend/io.hpp"

namespace levelblend {
namespace {

constexpr char kMagic[8] = {'L', 'V', 'L', 'B', 'L', 'N', 'D', '\0'};

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

class Writer {
 public:
  template <typename T>
  void put(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void put_bytes(std::string_view s) { out_.append(s); }
  void put_tensor(const std::string& name, const ad::Matrix& m) {
    put<std::uint32_t>(static_cast<std::uint32_t>(name.size()));
    put_bytes(name);
    put<std::uint32_t>(2);
    put<std::uint64_t>(static_cast<std::uint64_t>(m.rows()));
    put<std::uint64_t>(static_cast<std::uint64_t>(m.cols()));
    out_.append(reinterpret_cast<const char*>(m.data()), static_cast<std::size_t>(m.size()) * sizeof(double));
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string_view get_bytes(std::size_t n) {
    need(n);
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw Error(fmt::format("checkpoint truncated at byte {}", pos_));
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

Checkpoint make_checkpoint(const ModelConfig& config, std::uint64_t seed, ad::AdamConfig adam) {
  Checkpoint c;
  c.model = make_model(config);
  c.model->initialize(derive_seed(seed, "init"));
  c.adam = ad::AdamState::for_store(c.model->params(), adam);
  c.seed = seed;
  return c;
}

std::string serialize_checkpoint(const Checkpoint& checkpoint) {
  if (!checkpoint.model) throw Error("checkpoint has no model");
  const ModelConfig& mc = checkpoint.model->config();
  const auto& store = checkpoint.model->params();
  if (checkpoint.adam.m.size() != store.size() || checkpoint.adam.v.size() != store.size()) {
    throw Error("checkpoint optimizer state does not match the model");
  }
  Writer w;
  w.put_bytes(std::string_view(kMagic, sizeof(kMagic)));
  w.put<std::uint32_t>(kCheckpointVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(mc.kind));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(mc.latent));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(mc.vocab));
  w.put<std::uint64_t>(checkpoint.seed);
  w.put<std::uint64_t>(checkpoint.epoch);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(mc.rows));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(mc.cols));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(mc.hidden.size()));
  for (int h : mc.hidden) w.put<std::uint32_t>(static_cast<std::uint32_t>(h));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(mc.encoder_layers));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(mc.encoder_hidden));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(mc.decoder_layers));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(mc.decoder_hidden));
  w.put<double>(mc.dropout);
  const auto& adam = checkpoint.adam;
  w.put<std::uint64_t>(adam.step);
  w.put<double>(adam.config.beta1);
  w.put<double>(adam.config.beta2);
  w.put<double>(adam.config.epsilon);
  w.put<std::uint32_t>(adam.config.amsgrad ? 1u : 0u);
  w.put<std::uint32_t>(static_cast<std::uint32_t>((adam.config.amsgrad ? 4 : 3) * store.size()));
  for (std::size_t i = 0; i < store.size(); ++i) w.put_tensor(store[i].name, store[i].value);
  for (std::size_t i = 0; i < store.size(); ++i) w.put_tensor("adam.m/" + store[i].name, adam.m[i]);
  for (std::size_t i = 0; i < store.size(); ++i) w.put_tensor("adam.v/" + store[i].name, adam.v[i]);
  if (adam.config.amsgrad) {
    for (std::size_t i = 0; i < store.size(); ++i) w.put_tensor("adam.vmax/" + store[i].name, adam.v_max[i]);
  }
  return w.take();
}

Checkpoint deserialize_checkpoint(std::string_view bytes) {
  Reader r(bytes);
  if (r.get_bytes(sizeof(kMagic)) != std::string_view(kMagic, sizeof(kMagic))) throw Error("not a checkpoint file");
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) throw Error(fmt::format("unsupported checkpoint version {}", version));
  ModelConfig mc;
  const auto kind = r.get<std::uint32_t>();
  if (kind > 1) throw Error(fmt::format("unknown model kind {} in checkpoint", kind));
  mc.kind = static_cast<ModelKind>(kind);
  mc.latent = static_cast<int>(r.get<std::uint32_t>());
  mc.vocab = static_cast<int>(r.get<std::uint32_t>());
  Checkpoint c;
  c.seed = r.get<std::uint64_t>();
  c.epoch = r.get<std::uint64_t>();
  mc.rows = static_cast<int>(r.get<std::uint32_t>());
  mc.cols = static_cast<int>(r.get<std::uint32_t>());
  mc.hidden.resize(r.get<std::uint32_t>());
  for (int& h : mc.hidden) h = static_cast<int>(r.get<std::uint32_t>());
  mc.encoder_layers = static_cast<int>(r.get<std::uint32_t>());
  mc.encoder_hidden = static_cast<int>(r.get<std::uint32_t>());
  mc.decoder_layers = static_cast<int>(r.get<std::uint32_t>());
  mc.decoder_hidden = static_cast<int>(r.get<std::uint32_t>());
  mc.dropout = r.get<double>();
  c.adam.step = r.get<std::uint64_t>();
  c.adam.config.beta1 = r.get<double>();
  c.adam.config.beta2 = r.get<double>();
  c.adam.config.epsilon = r.get<double>();
  c.adam.config.amsgrad = r.get<std::uint32_t>() != 0;

  std::map<std::string, ad::Matrix, std::less<>> tensors;
  const auto count = r.get<std::uint32_t>();
  for (std::uint32_t t = 0; t < count; ++t) {
    std::string name(r.get_bytes(r.get<std::uint32_t>()));
    if (r.get<std::uint32_t>() != 2) throw Error(fmt::format("tensor {} is not rank 2", name));
    const auto rows = r.get<std::uint64_t>();
    const auto cols = r.get<std::uint64_t>();
    const auto raw = r.get_bytes(rows * cols * sizeof(double));
    ad::Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::memcpy(m.data(), raw.data(), raw.size());
    if (!tensors.emplace(name, std::move(m)).second) throw Error(fmt::format("duplicate tensor {}", name));
  }
  if (!r.done()) throw Error("trailing bytes after checkpoint tensors");

  c.model = make_model(mc);
  auto& store = c.model->params();
  auto take = [&](const std::string& name, const ad::Matrix& like) {
    auto it = tensors.find(name);
    if (it == tensors.end()) throw Error(fmt::format("checkpoint lacks tensor {}", name));
    if (it->second.rows() != like.rows() || it->second.cols() != like.cols()) {
      throw Error(fmt::format("tensor {} has shape {}x{}, model expects {}x{}", name, it->second.rows(),
                              it->second.cols(), like.rows(), like.cols()));
    }
    ad::Matrix m = std::move(it->second);
    tensors.erase(it);
    return m;
  };
  for (std::size_t i = 0; i < store.size(); ++i) {
    store[i].value = take(store[i].name, store[i].value);
    c.adam.m.push_back(take("adam.m/" + store[i].name, store[i].value));
    c.adam.v.push_back(take("adam.v/" + store[i].name, store[i].value));
    if (c.adam.config.amsgrad) c.adam.v_max.push_back(take("adam.vmax/" + store[i].name, store[i].value));
  }
  if (!tensors.empty()) throw Error(fmt::format("checkpoint has unknown tensor {}", tensors.begin()->first));
  return c;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& file) {
  write_file(file, serialize_checkpoint(checkpoint));
}

Checkpoint load_checkpoint(const std::filesystem::path& file) { return deserialize_checkpoint(read_file(file)); }

}  // namespace levelblend
