#pragma once

#include <cstdint>
#include <string>

#include "levelblend/autodiff.hpp"

namespace levelblend::ad {

/// Fully-connected layer y = x W + b with W stored (in x out).
struct Dense {
  Parameter* w = nullptr;
  Parameter* b = nullptr;

  Var operator()(Tape& tape, Var x) const { return linear(x, tape.param(*w), tape.param(*b)); }
  Eigen::Index in() const { return w->value.rows(); }
  Eigen::Index out() const { return w->value.cols(); }
};

/// Registers `<name>.w` and `<name>.b`, both initialized in +-1/sqrt(in).
Dense make_dense(ParameterStore& store, const std::string& name, Eigen::Index in, Eigen::Index out);

/// One gated recurrent layer. Gate blocks are ordered [reset | update | candidate].
struct GruLayer {
  Parameter* w_ih = nullptr;  // in x 3H, or a (vocab x 3H) table for token input
  Parameter* w_hh = nullptr;  // H x 3H
  Parameter* b_ih = nullptr;
  Parameter* b_hh = nullptr;

  Eigen::Index hidden() const { return w_hh->value.rows(); }
  /// Next state from a dense input.
  Var step(Tape& tape, Var x, Var h) const;
  /// Next state from token ids (one per batch row) looked up in w_ih.
  Var step_tokens(Tape& tape, std::span<const int> ids, Var h) const;
};

/// Registers the four GRU tensors, all initialized in +-1/sqrt(hidden).
GruLayer make_gru(ParameterStore& store, const std::string& name, Eigen::Index in, Eigen::Index hidden);

/// Draws every parameter uniformly in +-init_bound from a stream derived from
/// the seed and the parameter name.
void initialize_uniform(ParameterStore& store, std::uint64_t seed);

}  // namespace levelblend::ad
