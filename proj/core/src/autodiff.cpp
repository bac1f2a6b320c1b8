#include "levelblend/autodiff.hpp"

#include <cmath>

#include <fmt/format.h>

namespace levelblend::ad {

Parameter& ParameterStore::add(const std::string& name, Eigen::Index rows, Eigen::Index cols) {
  if (find(name)) throw Error(fmt::format("duplicate parameter {}", name));
  params_.push_back(std::make_unique<Parameter>(name, rows, cols));
  return *params_.back();
}

Parameter* ParameterStore::find(const std::string& name) {
  for (auto& p : params_) {
    if (p->name == name) return p.get();
  }
  return nullptr;
}

Parameter& ParameterStore::get(const std::string& name) {
  if (auto* p = find(name)) return *p;
  throw Error(fmt::format("no parameter named {}", name));
}

const Parameter& ParameterStore::get(const std::string& name) const {
  return const_cast<ParameterStore*>(this)->get(name);
}

void ParameterStore::zero_grad() {
  for (auto& p : params_) p->grad.setZero();
}

std::size_t ParameterStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p->value.size());
  return n;
}

const Matrix& Var::value() const { return tape_->value(id_); }

Var Tape::constant(Matrix value) { return push("constant", std::move(value), {}, nullptr); }

Var Tape::param(Parameter& p) {
  // One node per parameter per tape, so repeated use accumulates in one place.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].param == &p) return {this, static_cast<int>(i)};
  }
  Node n;
  n.op = "parameter";
  n.param = &p;
  n.needs_grad = record_;
  nodes_.push_back(std::move(n));
  return {this, static_cast<int>(nodes_.size() - 1)};
}

Var Tape::push(const char* op, Matrix value, std::initializer_list<Var> inputs, Backprop backprop) {
  if (!value.allFinite()) throw NonFiniteError(fmt::format("non-finite value produced by {}", op));
  Node n;
  n.op = op;
  n.value = std::move(value);
  if (record_) {
    for (const auto& v : inputs) {
      if (v.tape() != this) throw Error(fmt::format("{}: operand from a different tape", op));
      n.needs_grad = n.needs_grad || needs_grad(v.id());
    }
    if (n.needs_grad) n.backprop = std::move(backprop);
  }
  nodes_.push_back(std::move(n));
  return {this, static_cast<int>(nodes_.size() - 1)};
}

const Matrix& Tape::value(int id) const {
  const Node& n = nodes_[static_cast<std::size_t>(id)];
  return n.param ? n.param->value : n.value;
}

Matrix& Tape::grad_buffer(int id) {
  Node& n = nodes_[static_cast<std::size_t>(id)];
  if (n.param) return n.param->grad;
  if (n.grad.size() == 0) n.grad = Matrix::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

void Tape::accumulate(int id, const Matrix& grad) {
  if (!needs_grad(id)) return;
  grad_buffer(id) += grad;
}

void Tape::backward(Var loss) {
  if (!record_) throw Error("backward on a tape that does not record");
  if (loss.tape() != this) throw Error("backward: loss from a different tape");
  if (loss.rows() != 1 || loss.cols() != 1) throw Error("backward needs a 1x1 loss");
  if (!needs_grad(loss.id())) return;
  accumulate(loss.id(), Matrix::Ones(1, 1));
  for (int i = loss.id(); i >= 0; --i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    if (n.param) {
      if (!n.param->grad.allFinite()) {
        throw NonFiniteError(fmt::format("non-finite gradient for parameter {}", n.param->name));
      }
      continue;
    }
    if (!n.backprop || n.grad.size() == 0) continue;
    if (!n.grad.allFinite()) throw NonFiniteError(fmt::format("non-finite gradient at {} (node {})", n.op, i));
    n.backprop(*this, n.grad);
    n.grad.resize(0, 0);
  }
}

namespace {

bool broadcast_row(const Matrix& a, const Matrix& b) { return b.rows() == 1 && a.rows() != 1 && a.cols() == b.cols(); }

void check_same_shape(const char* op, const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(fmt::format("{}: shape mismatch {}x{} vs {}x{}", op, a.rows(), a.cols(), b.rows(), b.cols()));
  }
}

Tape& tape_of(Var a) {
  if (!a.tape()) throw Error("operation on an empty Var");
  return *a.tape();
}

}  // namespace

Var matmul(Var a, Var b) {
  if (a.cols() != b.rows()) {
    throw Error(fmt::format("matmul: {}x{} times {}x{}", a.rows(), a.cols(), b.rows(), b.cols()));
  }
  const int ia = a.id(), ib = b.id();
  return tape_of(a).push("matmul", a.value() * b.value(), {a, b}, [ia, ib](Tape& t, const Matrix& g) {
    if (t.needs_grad(ia)) t.accumulate(ia, g * t.value(ib).transpose());
    if (t.needs_grad(ib)) t.accumulate(ib, t.value(ia).transpose() * g);
  });
}

Var add(Var a, Var b) {
  const int ia = a.id(), ib = b.id();
  if (broadcast_row(a.value(), b.value())) {
    Matrix out = a.value().rowwise() + b.value().row(0);
    return tape_of(a).push("add", std::move(out), {a, b}, [ia, ib](Tape& t, const Matrix& g) {
      t.accumulate(ia, g);
      if (t.needs_grad(ib)) t.accumulate(ib, g.colwise().sum());
    });
  }
  check_same_shape("add", a.value(), b.value());
  return tape_of(a).push("add", a.value() + b.value(), {a, b}, [ia, ib](Tape& t, const Matrix& g) {
    t.accumulate(ia, g);
    t.accumulate(ib, g);
  });
}

Var sub(Var a, Var b) {
  const int ia = a.id(), ib = b.id();
  if (broadcast_row(a.value(), b.value())) {
    Matrix out = a.value().rowwise() - b.value().row(0);
    return tape_of(a).push("sub", std::move(out), {a, b}, [ia, ib](Tape& t, const Matrix& g) {
      t.accumulate(ia, g);
      if (t.needs_grad(ib)) t.accumulate(ib, -g.colwise().sum());
    });
  }
  check_same_shape("sub", a.value(), b.value());
  return tape_of(a).push("sub", a.value() - b.value(), {a, b}, [ia, ib](Tape& t, const Matrix& g) {
    t.accumulate(ia, g);
    if (t.needs_grad(ib)) t.accumulate(ib, -g);
  });
}

Var mul(Var a, Var b) {
  check_same_shape("mul", a.value(), b.value());
  const int ia = a.id(), ib = b.id();
  return tape_of(a).push("mul", a.value().cwiseProduct(b.value()), {a, b}, [ia, ib](Tape& t, const Matrix& g) {
    if (t.needs_grad(ia)) t.accumulate(ia, g.cwiseProduct(t.value(ib)));
    if (t.needs_grad(ib)) t.accumulate(ib, g.cwiseProduct(t.value(ia)));
  });
}

Var scale(Var a, double s) { return affine(a, s, 0.0); }

Var affine(Var a, double s, double t0) {
  const int ia = a.id();
  Matrix out = (a.value() * s).array() + t0;
  return tape_of(a).push("affine", std::move(out), {a}, [ia, s](Tape& t, const Matrix& g) { t.accumulate(ia, g * s); });
}

Var relu(Var a) {
  const int ia = a.id();
  return tape_of(a).push("relu", a.value().cwiseMax(0.0), {a}, [ia](Tape& t, const Matrix& g) {
    t.accumulate(ia, (t.value(ia).array() > 0.0).select(g, 0.0));
  });
}

Var sigmoid(Var a) {
  Matrix y = (1.0 + (-a.value().array()).exp()).inverse();
  Tape& tape = tape_of(a);
  const int ia = a.id();
  const int self = static_cast<int>(tape.size());
  return tape.push("sigmoid", std::move(y), {a}, [ia, self](Tape& t, const Matrix& g) {
    const auto& y = t.value(self).array();
    t.accumulate(ia, (g.array() * y * (1.0 - y)).matrix());
  });
}

Var tanh(Var a) {
  Tape& tape = tape_of(a);
  const int ia = a.id();
  const int self = static_cast<int>(tape.size());
  return tape.push("tanh", a.value().array().tanh().matrix(), {a}, [ia, self](Tape& t, const Matrix& g) {
    const auto& y = t.value(self).array();
    t.accumulate(ia, (g.array() * (1.0 - y.square())).matrix());
  });
}

Var exp(Var a) {
  Tape& tape = tape_of(a);
  const int ia = a.id();
  const int self = static_cast<int>(tape.size());
  return tape.push("exp", a.value().array().exp().matrix(), {a}, [ia, self](Tape& t, const Matrix& g) {
    t.accumulate(ia, g.cwiseProduct(t.value(self)));
  });
}

namespace {

Matrix row_softmax(const Matrix& x) {
  Matrix y = x.colwise() - x.rowwise().maxCoeff();
  y = y.array().exp();
  y.array().colwise() /= y.rowwise().sum().array();
  return y;
}

}  // namespace

Var softmax_rows(Var a) {
  Tape& tape = tape_of(a);
  const int ia = a.id();
  const int self = static_cast<int>(tape.size());
  return tape.push("softmax", row_softmax(a.value()), {a}, [ia, self](Tape& t, const Matrix& g) {
    const Matrix& y = t.value(self);
    Eigen::VectorXd dot = g.cwiseProduct(y).rowwise().sum();
    Matrix d = g.colwise() - dot;
    t.accumulate(ia, d.cwiseProduct(y));
  });
}

Var concat_cols(Var a, Var b) {
  if (a.rows() != b.rows()) throw Error("concat_cols: row count mismatch");
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a.value(), b.value();
  const int ia = a.id(), ib = b.id();
  const Eigen::Index ca = a.cols(), cb = b.cols();
  return tape_of(a).push("concat_cols", std::move(out), {a, b}, [ia, ib, ca, cb](Tape& t, const Matrix& g) {
    if (t.needs_grad(ia)) t.accumulate(ia, g.leftCols(ca));
    if (t.needs_grad(ib)) t.accumulate(ib, g.rightCols(cb));
  });
}

Var slice_cols(Var a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.cols()) throw Error("slice_cols: range outside matrix");
  const int ia = a.id();
  return tape_of(a).push("slice_cols", a.value().middleCols(start, count), {a},
                         [ia, start, count](Tape& t, const Matrix& g) {
                           t.grad_buffer(ia).middleCols(start, count) += g;
                         });
}

Var reshape(Var a, Eigen::Index rows, Eigen::Index cols) {
  if (rows * cols != a.value().size()) throw Error("reshape: element count changes");
  const int ia = a.id();
  const Eigen::Index ar = a.rows(), ac = a.cols();
  Matrix out = Eigen::Map<const Matrix>(a.value().data(), rows, cols);
  return tape_of(a).push("reshape", std::move(out), {a}, [ia, ar, ac](Tape& t, const Matrix& g) {
    t.accumulate(ia, Eigen::Map<const Matrix>(g.data(), ar, ac));
  });
}

Var sum(Var a) {
  const int ia = a.id();
  const Eigen::Index r = a.rows(), c = a.cols();
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  return tape_of(a).push("sum", std::move(out), {a}, [ia, r, c](Tape& t, const Matrix& g) {
    t.accumulate(ia, Matrix::Constant(r, c, g(0, 0)));
  });
}

Var linear(Var x, Var w, Var b) {
  if (x.cols() != w.rows() || b.rows() != 1 || b.cols() != w.cols()) {
    throw Error(fmt::format("linear: x {}x{}, W {}x{}, b {}x{}", x.rows(), x.cols(), w.rows(), w.cols(), b.rows(),
                            b.cols()));
  }
  Matrix out = x.value() * w.value();
  out.rowwise() += b.value().row(0);
  const int ix = x.id(), iw = w.id(), ib = b.id();
  return tape_of(x).push("linear", std::move(out), {x, w, b}, [ix, iw, ib](Tape& t, const Matrix& g) {
    if (t.needs_grad(ix)) t.accumulate(ix, g * t.value(iw).transpose());
    if (t.needs_grad(iw)) t.grad_buffer(iw).noalias() += t.value(ix).transpose() * g;
    if (t.needs_grad(ib)) t.grad_buffer(ib) += g.colwise().sum();
  });
}

Var embed(std::span<const int> ids, Var table, Var b) {
  const Matrix& tv = table.value();
  if (b.rows() != 1 || b.cols() != tv.cols()) throw Error("embed: bias shape mismatch");
  Matrix out(static_cast<Eigen::Index>(ids.size()), tv.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= tv.rows()) throw Error(fmt::format("embed: id {} outside table", ids[i]));
    out.row(static_cast<Eigen::Index>(i)) = tv.row(ids[i]) + b.value().row(0);
  }
  std::vector<int> id_copy(ids.begin(), ids.end());
  const int it = table.id(), ib = b.id();
  return tape_of(table).push("embed", std::move(out), {table, b},
                             [it, ib, id_copy = std::move(id_copy)](Tape& t, const Matrix& g) {
                               if (t.needs_grad(it)) {
                                 Matrix& dt = t.grad_buffer(it);
                                 for (std::size_t i = 0; i < id_copy.size(); ++i) {
                                   dt.row(id_copy[i]) += g.row(static_cast<Eigen::Index>(i));
                                 }
                               }
                               if (t.needs_grad(ib)) t.grad_buffer(ib) += g.colwise().sum();
                             });
}

Var embed_sum(std::span<const int> ids, int group, Var table, Var b) {
  const Matrix& tv = table.value();
  if (group < 1 || ids.size() % static_cast<std::size_t>(group) != 0) throw Error("embed_sum: ragged id groups");
  if (b.rows() != 1 || b.cols() != tv.cols()) throw Error("embed_sum: bias shape mismatch");
  const auto rows = static_cast<Eigen::Index>(ids.size() / static_cast<std::size_t>(group));
  Matrix out(rows, tv.cols());
  for (Eigen::Index r = 0; r < rows; ++r) {
    auto row = out.row(r);
    row = b.value().row(0);
    for (int k = 0; k < group; ++k) {
      const int id = ids[static_cast<std::size_t>(r * group + k)];
      if (id < 0 || id >= tv.rows()) throw Error(fmt::format("embed_sum: id {} outside table", id));
      row += tv.row(id);
    }
  }
  std::vector<int> id_copy(ids.begin(), ids.end());
  const int it = table.id(), ib = b.id();
  return tape_of(table).push("embed_sum", std::move(out), {table, b},
                             [it, ib, group, id_copy = std::move(id_copy)](Tape& t, const Matrix& g) {
                               if (t.needs_grad(it)) {
                                 Matrix& dt = t.grad_buffer(it);
                                 for (std::size_t i = 0; i < id_copy.size(); ++i) {
                                   dt.row(id_copy[i]) += g.row(static_cast<Eigen::Index>(i / group));
                                 }
                               }
                               if (t.needs_grad(ib)) t.grad_buffer(ib) += g.colwise().sum();
                             });
}

Var cross_entropy(Var logits, std::span<const int> targets) {
  const Matrix& x = logits.value();
  if (static_cast<Eigen::Index>(targets.size()) != x.rows()) throw Error("cross_entropy: one target per row");
  Matrix probs = row_softmax(x);
  double loss = 0.0;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const int k = targets[static_cast<std::size_t>(r)];
    if (k < 0) continue;
    if (k >= x.cols()) throw Error(fmt::format("cross_entropy: target {} outside {} classes", k, x.cols()));
    const double m = x.row(r).maxCoeff();
    const double lse = m + std::log((x.row(r).array() - m).exp().sum());
    loss += lse - x(r, k);
  }
  Matrix out(1, 1);
  out(0, 0) = loss;
  std::vector<int> tgt(targets.begin(), targets.end());
  const int il = logits.id();
  return tape_of(logits).push("cross_entropy", std::move(out), {logits},
                              [il, probs = std::move(probs), tgt = std::move(tgt)](Tape& t, const Matrix& g) {
                                Matrix d = probs;
                                for (std::size_t r = 0; r < tgt.size(); ++r) {
                                  const auto row = static_cast<Eigen::Index>(r);
                                  if (tgt[r] < 0) {
                                    d.row(row).setZero();
                                  } else {
                                    d(row, tgt[r]) -= 1.0;
                                  }
                                }
                                t.accumulate(il, d * g(0, 0));
                              });
}

Var reparameterize(Var mean, Var logvar, const Matrix& eps) {
  check_same_shape("reparameterize", mean.value(), logvar.value());
  check_same_shape("reparameterize", mean.value(), eps);
  Matrix sigma = (0.5 * logvar.value().array()).exp();
  Matrix out = mean.value() + sigma.cwiseProduct(eps);
  const int im = mean.id(), il = logvar.id();
  return tape_of(mean).push("reparameterize", std::move(out), {mean, logvar},
                            [im, il, sigma = std::move(sigma), eps](Tape& t, const Matrix& g) {
                              t.accumulate(im, g);
                              if (t.needs_grad(il)) t.accumulate(il, 0.5 * g.cwiseProduct(sigma).cwiseProduct(eps));
                            });
}

Var kl_standard_normal(Var mean, Var logvar) {
  check_same_shape("kl", mean.value(), logvar.value());
  const auto m = mean.value().array();
  const auto lv = logvar.value().array();
  Matrix out(1, 1);
  out(0, 0) = -0.5 * (1.0 + lv - m.square() - lv.exp()).sum();
  const int im = mean.id(), il = logvar.id();
  return tape_of(mean).push("kl", std::move(out), {mean, logvar}, [im, il](Tape& t, const Matrix& g) {
    const double s = g(0, 0);
    if (t.needs_grad(im)) t.accumulate(im, s * t.value(im));
    if (t.needs_grad(il)) t.accumulate(il, (0.5 * s * (t.value(il).array().exp() - 1.0)).matrix());
  });
}

Var dropout(Var a, double rate, Rng& rng) {
  if (rate <= 0.0) return a;
  if (rate >= 1.0) throw Error("dropout rate must be below 1");
  const double keep_scale = 1.0 / (1.0 - rate);
  Matrix mask(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < mask.size(); ++i) mask.data()[i] = uniform01(rng) < rate ? 0.0 : keep_scale;
  Matrix out = a.value().cwiseProduct(mask);
  const int ia = a.id();
  return tape_of(a).push("dropout", std::move(out), {a}, [ia, mask = std::move(mask)](Tape& t, const Matrix& g) {
    t.accumulate(ia, g.cwiseProduct(mask));
  });
}

Var gru_cell(Var gi, Var gh, Var h) {
  const Eigen::Index H = h.cols();
  if (gi.cols() != 3 * H || gh.cols() != 3 * H || gi.rows() != h.rows() || gh.rows() != h.rows()) {
    throw Error(fmt::format("gru_cell: gates {}x{} / {}x{} for state {}x{}", gi.rows(), gi.cols(), gh.rows(),
                            gh.cols(), h.rows(), h.cols()));
  }
  const Matrix& xi = gi.value();
  const Matrix& xh = gh.value();
  const Matrix& hv = h.value();
  Matrix r = (1.0 + (-(xi.leftCols(H) + xh.leftCols(H)).array()).exp()).inverse();
  Matrix z = (1.0 + (-(xi.middleCols(H, H) + xh.middleCols(H, H)).array()).exp()).inverse();
  Matrix hn = xh.rightCols(H);
  Matrix n = (xi.rightCols(H).array() + r.array() * hn.array()).tanh();
  Matrix out = n + z.cwiseProduct(hv - n);

  const int igi = gi.id(), igh = gh.id(), ih = h.id();
  return tape_of(h).push(
      "gru_cell", std::move(out), {gi, gh, h},
      [igi, igh, ih, H, r = std::move(r), z = std::move(z), n = std::move(n), hn = std::move(hn)](Tape& t,
                                                                                                const Matrix& g) {
        const auto& hv = t.value(ih);
        Matrix dpre_n = (g.array() * (1.0 - z.array()) * (1.0 - n.array().square())).matrix();
        Matrix dpre_z = (g.array() * (hv - n).array() * z.array() * (1.0 - z.array())).matrix();
        Matrix dpre_r = (dpre_n.array() * hn.array() * r.array() * (1.0 - r.array())).matrix();
        if (t.needs_grad(igi)) {
          Matrix& d = t.grad_buffer(igi);
          d.leftCols(H) += dpre_r;
          d.middleCols(H, H) += dpre_z;
          d.rightCols(H) += dpre_n;
        }
        if (t.needs_grad(igh)) {
          Matrix& d = t.grad_buffer(igh);
          d.leftCols(H) += dpre_r;
          d.middleCols(H, H) += dpre_z;
          d.rightCols(H) += dpre_n.cwiseProduct(r);
        }
        if (t.needs_grad(ih)) t.accumulate(ih, g.cwiseProduct(z));
      });
}

}  // namespace levelblend::ad
