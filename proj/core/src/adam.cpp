#include "levelblend/adam.hpp"

#include <cmath>

#include <fmt/format.h>

namespace levelblend::ad {

AdamState AdamState::for_store(const ParameterStore& store, AdamConfig config) {
  AdamState s;
  s.config = config;
  for (std::size_t i = 0; i < store.size(); ++i) {
    const auto& p = store[i].value;
    s.m.push_back(Matrix::Zero(p.rows(), p.cols()));
    s.v.push_back(Matrix::Zero(p.rows(), p.cols()));
    if (config.amsgrad) s.v_max.push_back(Matrix::Zero(p.rows(), p.cols()));
  }
  return s;
}

void adam_step(ParameterStore& store, AdamState& state, double learning_rate) {
  if (state.m.size() != store.size() || state.v.size() != store.size()) {
    throw Error(fmt::format("adam: {} moment slots for {} parameters", state.m.size(), store.size()));
  }
  if (state.config.amsgrad && state.v_max.size() != store.size()) {
    throw Error(fmt::format("adam: {} v_max slots for {} parameters", state.v_max.size(), store.size()));
  }
  for (std::size_t i = 0; i < store.size(); ++i) {
    const Parameter& p = store[i];
    if (state.m[i].rows() != p.value.rows() || state.m[i].cols() != p.value.cols() ||
        state.v[i].rows() != p.value.rows() || state.v[i].cols() != p.value.cols()) {
      throw Error(fmt::format("adam: moment shape mismatch for {}", p.name));
    }
    if (state.config.amsgrad &&
        (state.v_max[i].rows() != p.value.rows() || state.v_max[i].cols() != p.value.cols())) {
      throw Error(fmt::format("adam: moment shape mismatch for {}", p.name));
    }
  }
  ++state.step;
  const auto& c = state.config;
  const double t = static_cast<double>(state.step);
  const double correct1 = 1.0 - std::pow(c.beta1, t);
  const double correct2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < store.size(); ++i) {
    Parameter& p = store[i];
    auto m = state.m[i].array();
    auto v = state.v[i].array();
    const auto g = p.grad.array();
    m = c.beta1 * m + (1.0 - c.beta1) * g;
    v = c.beta2 * v + (1.0 - c.beta2) * g.square();
    if (c.amsgrad) {
      auto vm = state.v_max[i].array();
      vm = vm.max(v);
      p.value.array() -= learning_rate * (m / correct1) / ((vm / correct2).sqrt() + c.epsilon);
    } else {
      p.value.array() -= learning_rate * (m / correct1) / ((v / correct2).sqrt() + c.epsilon);
    }
  }
}

}  // namespace levelblend::ad
