#include "levelblend/nn.hpp"

#include <cmath>

#include "levelblend/random.hpp"

namespace levelblend::ad {

Dense make_dense(ParameterStore& store, const std::string& name, Eigen::Index in, Eigen::Index out) {
  Dense d;
  d.w = &store.add(name + ".w", in, out);
  d.b = &store.add(name + ".b", 1, out);
  d.w->init_bound = d.b->init_bound = 1.0 / std::sqrt(static_cast<double>(in));
  return d;
}

GruLayer make_gru(ParameterStore& store, const std::string& name, Eigen::Index in, Eigen::Index hidden) {
  GruLayer g;
  g.w_ih = &store.add(name + ".w_ih", in, 3 * hidden);
  g.w_hh = &store.add(name + ".w_hh", hidden, 3 * hidden);
  g.b_ih = &store.add(name + ".b_ih", 1, 3 * hidden);
  g.b_hh = &store.add(name + ".b_hh", 1, 3 * hidden);
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (auto* p : {g.w_ih, g.w_hh, g.b_ih, g.b_hh}) p->init_bound = bound;
  return g;
}

Var GruLayer::step(Tape& tape, Var x, Var h) const {
  Var gi = linear(x, tape.param(*w_ih), tape.param(*b_ih));
  Var gh = linear(h, tape.param(*w_hh), tape.param(*b_hh));
  return gru_cell(gi, gh, h);
}

Var GruLayer::step_tokens(Tape& tape, std::span<const int> ids, Var h) const {
  Var gi = embed(ids, tape.param(*w_ih), tape.param(*b_ih));
  Var gh = linear(h, tape.param(*w_hh), tape.param(*b_hh));
  return gru_cell(gi, gh, h);
}

void initialize_uniform(ParameterStore& store, std::uint64_t seed) {
  for (std::size_t i = 0; i < store.size(); ++i) {
    Parameter& p = store[i];
    Rng rng = make_rng(seed, "init:" + p.name);
    for (Eigen::Index k = 0; k < p.value.size(); ++k) {
      p.value.data()[k] = (2.0 * uniform01(rng) - 1.0) * p.init_bound;
    }
    p.grad.setZero();
  }
}

}  // namespace levelblend::ad
