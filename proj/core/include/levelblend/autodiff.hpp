#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levelblend/grid.hpp"
#include "levelblend/random.hpp"

namespace levelblend::ad {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Trainable tensor. The gradient is accumulated by Tape::backward.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
  /// Half-width of the uniform initialization range.
  double init_bound = 0.0;

  Parameter(std::string n, Eigen::Index rows, Eigen::Index cols)
      : name(std::move(n)), value(Matrix::Zero(rows, cols)), grad(Matrix::Zero(rows, cols)) {}
};

/// Named parameters with stable addresses, in registration order.
class ParameterStore {
 public:
  Parameter& add(const std::string& name, Eigen::Index rows, Eigen::Index cols);
  Parameter& get(const std::string& name);
  const Parameter& get(const std::string& name) const;
  Parameter* find(const std::string& name);

  std::size_t size() const { return params_.size(); }
  Parameter& operator[](std::size_t i) { return *params_[i]; }
  const Parameter& operator[](std::size_t i) const { return *params_[i]; }

  void zero_grad();
  std::size_t scalar_count() const;

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

class Tape;

/// Handle to a node on a tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}

  const Matrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  double scalar() const { return value()(0, 0); }

  Tape* tape() const { return tape_; }
  int id() const { return id_; }

 private:
  Tape* tape_ = nullptr;
  int id_ = -1;
};

/// Records a forward computation so it can be differentiated in reverse.
///
/// Nodes are appended in evaluation order, which is already a topological
/// order; backward walks the tape once from the loss down to node 0. A tape
/// built with `record = false` only evaluates values (inference).
class Tape {
 public:
  explicit Tape(bool record = true) : record_(record) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return record_; }

  Var constant(Matrix value);
  Var param(Parameter& p);

  /// Seeds d(loss)/d(loss) = 1 for a 1x1 loss and accumulates gradients into
  /// every reachable parameter. Throws NonFiniteError naming the first node whose
  /// gradient is not finite.
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }

  // Node plumbing for op implementations.
  using Backprop = std::function<void(Tape&, const Matrix& grad)>;
  Var push(const char* op, Matrix value, std::initializer_list<Var> inputs, Backprop backprop);
  const Matrix& value(int id) const;
  void accumulate(int id, const Matrix& grad);
  bool needs_grad(int id) const { return nodes_[static_cast<std::size_t>(id)].needs_grad; }
  /// Gradient buffer of a node (allocated on demand), for ops that scatter.
  Matrix& grad_buffer(int id);

 private:
  struct Node {
    const char* op = "";
    Matrix value;
    Matrix grad;
    Parameter* param = nullptr;
    bool needs_grad = false;
    Backprop backprop;
  };

  bool record_;
  std::vector<Node> nodes_;
};

// Elementwise and linear-algebra primitives. Shapes follow (batch rows, feature cols).
Var matmul(Var a, Var b);
/// a + b; b may also be a 1xN row broadcast over a's rows.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double s);
/// s * a + t
Var affine(Var a, double s, double t);
/// ReLU; the subgradient at 0 is 0.
Var relu(Var a);
Var sigmoid(Var a);
Var tanh(Var a);
Var exp(Var a);
Var softmax_rows(Var a);
Var concat_cols(Var a, Var b);
Var slice_cols(Var a, Eigen::Index start, Eigen::Index count);
/// Row-major reinterpretation with the same element count.
Var reshape(Var a, Eigen::Index rows, Eigen::Index cols);
Var sum(Var a);

/// x W + b with b a 1xN row.
Var linear(Var x, Var w, Var b);
/// Rows of `table` picked by `ids`, plus the 1xN row `b`. Equivalent to
/// one_hot(ids) * table + b.
Var embed(std::span<const int> ids, Var table, Var b);
/// Row i is b plus the sum of table rows ids[i*group .. (i+1)*group). This is a
/// dense layer applied to a concatenation of `group` one-hot blocks.
Var embed_sum(std::span<const int> ids, int group, Var table, Var b);

/// Sum over rows of -log softmax(logits)[row, target]. Targets < 0 are skipped.
Var cross_entropy(Var logits, std::span<const int> targets);

/// z = mean + exp(logvar / 2) * eps.
Var reparameterize(Var mean, Var logvar, const Matrix& eps);
/// KL(N(mean, diag exp(logvar)) || N(0, I)) summed over all rows.
Var kl_standard_normal(Var mean, Var logvar);

/// Inverted dropout: zeroes each entry with probability `rate` and scales the
/// rest by 1 / (1 - rate). Identity when rate is 0.
Var dropout(Var a, double rate, Rng& rng);

/// Fused GRU update. `gi` and `gh` hold the [reset | update | candidate] input
/// and hidden projections (B x 3H, biases included), `h` the previous state.
///   r = s(gi_r + gh_r), z = s(gi_z + gh_z), n = tanh(gi_n + r * gh_n)
///   h' = (1 - z) * n + z * h
Var gru_cell(Var gi, Var gh, Var h);

}  // namespace levelblend::ad
