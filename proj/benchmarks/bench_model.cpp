#include <benchmark/benchmark.h>

#include <vector>

#include "levelblend/random.hpp"
#include "levelblend/vae.hpp"

namespace {

std::vector<levelblend::Tokens> batch(int n, int vocab) {
  levelblend::Rng rng = levelblend::make_rng(5, "bench-batch");
  std::vector<levelblend::Tokens> out(static_cast<std::size_t>(n));
  for (auto& t : out) {
    t.resize(levelblend::kSegmentCells);
    for (auto& v : t) v = static_cast<int>(levelblend::uniform_index(rng, static_cast<std::size_t>(vocab)));
  }
  return out;
}

levelblend::ModelConfig config(levelblend::ModelKind kind) {
  levelblend::ModelConfig c;
  c.kind = kind;
  c.hidden = {128, 64, 32};
  c.encoder_layers = 2;
  c.encoder_hidden = 64;
  c.decoder_layers = 1;
  c.decoder_hidden = 32;
  c.dropout = 0.0;
  return c;
}

void BM_ForwardBackward(benchmark::State& state) {
  const auto kind = static_cast<levelblend::ModelKind>(state.range(0));
  auto model = levelblend::make_model(config(kind));
  model->initialize(1);
  const auto data = batch(static_cast<int>(state.range(1)), model->config().vocab);
  levelblend::Rng rng = levelblend::make_rng(2, "bench-noise");
  for (auto _ : state) {
    model->params().zero_grad();
    levelblend::ad::Tape tape;
    const auto loss = model->objective(tape, data, 1.0, rng, true);
    tape.backward(loss.total);
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_ForwardBackward)
    ->ArgsProduct({{0, 1}, {1, 8}})
    ->ArgNames({"gru", "batch"})
    ->Unit(benchmark::kMillisecond);

void BM_Generate(benchmark::State& state) {
  const auto kind = static_cast<levelblend::ModelKind>(state.range(0));
  auto model = levelblend::make_model(config(kind));
  model->initialize(1);
  const std::vector<double> z(static_cast<std::size_t>(model->config().latent), 0.1);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(model->generate(z, ++seed));
}
BENCHMARK(BM_Generate)->Arg(0)->Arg(1)->ArgName("gru")->Unit(benchmark::kMillisecond);

}  // namespace
