#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>

#include "levelblend/autodiff.hpp"
#include "levelblend/nn.hpp"
#include "levelblend/random.hpp"

namespace levelblend::ad {
namespace {

using Loss = std::function<Var(Tape&, std::vector<Var>&)>;

/// Largest relative gap between backward() and a central difference over every
/// entry of every parameter. Smooth losses use a fourth-order stencil.
double gradient_gap(std::vector<Parameter*> params, const Loss& loss, bool smooth = true) {
  auto evaluate = [&](bool record) {
    Tape tape(record);
    std::vector<Var> vars;
    for (auto* p : params) vars.push_back(tape.param(*p));
    Var out = loss(tape, vars);
    if (record) tape.backward(out);
    return out.scalar();
  };
  for (auto* p : params) p->grad.setZero();
  evaluate(true);
  const double h = smooth ? 1e-3 : 1e-5;
  double worst = 0;
  for (auto* p : params) {
    for (Eigen::Index k = 0; k < p->value.size(); ++k) {
      const double keep = p->value.data()[k];
      auto at = [&](double d) {
        p->value.data()[k] = keep + d;
        return evaluate(false);
      };
      const double numeric = smooth ? (8 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12 * h)
                                    : (at(h) - at(-h)) / (2 * h);
      p->value.data()[k] = keep;
      const double analytic = p->grad.data()[k];
      worst = std::max(worst, std::abs(numeric - analytic) / std::max({std::abs(numeric), std::abs(analytic), 1e-6}));
    }
  }
  return worst;
}

Parameter random_param(const std::string& name, Eigen::Index r, Eigen::Index c, Rng& rng, double lo = -1, double hi = 1) {
  Parameter p(name, r, c);
  for (Eigen::Index k = 0; k < p.value.size(); ++k) p.value.data()[k] = lo + (hi - lo) * uniform01(rng);
  return p;
}

/// Sum of the elementwise product with fixed weights, so every output entry matters.
Var weighted_sum(Tape& tape, Var x, Rng& rng) {
  Matrix w(x.rows(), x.cols());
  for (Eigen::Index k = 0; k < w.size(); ++k) w.data()[k] = uniform01(rng) - 0.5;
  return sum(mul(x, tape.constant(w)));
}

struct OpCase {
  const char* name;
  std::function<Var(Tape&, Var, Var)> op;
  Eigen::Index rows_a, cols_a, rows_b, cols_b;
};

TEST(AutodiffOps, EachPrimitiveMatchesFiniteDifferences) {
  const std::vector<OpCase> cases = {
      {"matmul", [](Tape&, Var a, Var b) { return matmul(a, b); }, 3, 4, 4, 2},
      {"add", [](Tape&, Var a, Var b) { return add(a, b); }, 3, 4, 3, 4},
      {"add broadcast", [](Tape&, Var a, Var b) { return add(a, b); }, 3, 4, 1, 4},
      {"sub", [](Tape&, Var a, Var b) { return sub(a, b); }, 2, 3, 2, 3},
      {"mul", [](Tape&, Var a, Var b) { return mul(a, b); }, 2, 3, 2, 3},
      {"scale", [](Tape&, Var a, Var b) { return add(scale(a, -2.5), b); }, 2, 3, 2, 3},
      {"affine", [](Tape&, Var a, Var b) { return mul(affine(a, 1.5, 0.3), b); }, 2, 3, 2, 3},
      {"sigmoid", [](Tape&, Var a, Var b) { return mul(sigmoid(a), b); }, 2, 3, 2, 3},
      {"tanh", [](Tape&, Var a, Var b) { return mul(tanh(a), b); }, 2, 3, 2, 3},
      {"exp", [](Tape&, Var a, Var b) { return mul(exp(a), b); }, 2, 3, 2, 3},
      {"softmax", [](Tape&, Var a, Var b) { return mul(softmax_rows(a), b); }, 3, 5, 3, 5},
      {"concat", [](Tape&, Var a, Var b) { return concat_cols(a, b); }, 3, 2, 3, 4},
      {"slice", [](Tape&, Var a, Var b) { return add(slice_cols(a, 1, 3), b); }, 2, 5, 2, 3},
      {"reshape", [](Tape&, Var a, Var b) { return mul(reshape(a, 3, 2), b); }, 2, 3, 3, 2},
      {"linear", [](Tape& t, Var a, Var b) { return linear(a, b, t.constant(Matrix::Constant(1, 2, 0.1))); }, 3, 4,
       4, 2},
  };
  Rng rng = make_rng(1, "ops");
  for (const auto& c : cases) {
    Parameter a = random_param("a", c.rows_a, c.cols_a, rng);
    Parameter b = random_param("b", c.rows_b, c.cols_b, rng);
    const std::uint64_t wseed = derive_seed(1, c.name);
    const double gap = gradient_gap({&a, &b}, [&](Tape& t, std::vector<Var>& v) {
      Rng w = make_rng(wseed, "w");
      return weighted_sum(t, c.op(t, v[0], v[1]), w);
    });
    EXPECT_LT(gap, 1e-4) << c.name;
  }
}

TEST(AutodiffOps, ReluAwayFromTheKink) {
  Rng rng = make_rng(2, "relu");
  Parameter a = random_param("a", 3, 4, rng);
  for (Eigen::Index k = 0; k < a.value.size(); ++k) {
    if (std::abs(a.value.data()[k]) < 0.1) a.value.data()[k] = 0.5;
  }
  const double gap = gradient_gap({&a}, [&](Tape& t, std::vector<Var>& v) {
    Rng w = make_rng(2, "w");
    return weighted_sum(t, relu(v[0]), w);
  }, false);
  EXPECT_LT(gap, 1e-4);
}

TEST(AutodiffOps, ReluSubgradientAtZeroIsZero) {
  Parameter a("a", 1, 3);
  a.value << -1.0, 0.0, 2.0;
  Tape tape;
  tape.backward(sum(relu(tape.param(a))));
  EXPECT_EQ(a.grad(0, 0), 0.0);
  EXPECT_EQ(a.grad(0, 1), 0.0);
  EXPECT_EQ(a.grad(0, 2), 1.0);
}

TEST(AutodiffOps, SumOfLinearMapHasOuterProductGradient) {
  Parameter w("w", 3, 2);
  w.value.setRandom();
  Matrix x(1, 3);
  x << 1.0, -2.0, 0.5;
  Tape tape;
  tape.backward(sum(matmul(tape.constant(x), tape.param(w))));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_EQ(w.grad(i, j), x(0, i));
}

TEST(AutodiffOps, LossLevelOpsMatchFiniteDifferences) {
  Rng rng = make_rng(3, "loss-ops");
  Parameter logits = random_param("logits", 4, 5, rng, -2, 2);
  const std::vector<int> targets = {0, 4, -1, 2};
  EXPECT_LT(gradient_gap({&logits}, [&](Tape&, std::vector<Var>& v) { return cross_entropy(v[0], targets); }), 1e-4);

  Parameter mean = random_param("mean", 2, 3, rng);
  Parameter logvar = random_param("logvar", 2, 3, rng);
  EXPECT_LT(gradient_gap({&mean, &logvar},
                         [&](Tape&, std::vector<Var>& v) { return kl_standard_normal(v[0], v[1]); }),
            1e-4);

  Matrix eps(2, 3);
  for (Eigen::Index k = 0; k < eps.size(); ++k) eps.data()[k] = standard_normal(rng);
  EXPECT_LT(gradient_gap({&mean, &logvar}, [&](Tape& t, std::vector<Var>& v) {
              Rng w = make_rng(3, "w");
              return weighted_sum(t, reparameterize(v[0], v[1], eps), w);
            }),
            1e-4);

  const std::vector<int> ids = {2, 0, 3};
  Parameter table = random_param("table", 4, 3, rng);
  Parameter bias = random_param("bias", 1, 3, rng);
  EXPECT_LT(gradient_gap({&table, &bias}, [&](Tape& t, std::vector<Var>& v) {
              Rng w = make_rng(3, "w-embed");
              return weighted_sum(t, embed(ids, v[0], v[1]), w);
            }),
            1e-4);
  const std::vector<int> grouped = {0, 1, 3, 2};  // two rows of two one-hot blocks
  Parameter wide = random_param("wide", 4, 3, rng);
  EXPECT_LT(gradient_gap({&wide, &bias}, [&](Tape& t, std::vector<Var>& v) {
              Rng w = make_rng(3, "w-embed-sum");
              return weighted_sum(t, embed_sum(grouped, 2, v[0], v[1]), w);
            }),
            1e-4);
}

TEST(AutodiffOps, GruCellMatchesFiniteDifferences) {
  Rng rng = make_rng(4, "gru");
  Parameter gi = random_param("gi", 2, 9, rng);
  Parameter gh = random_param("gh", 2, 9, rng);
  Parameter h = random_param("h", 2, 3, rng);
  EXPECT_LT(gradient_gap({&gi, &gh, &h}, [&](Tape& t, std::vector<Var>& v) {
              Rng w = make_rng(4, "w");
              return weighted_sum(t, gru_cell(v[0], v[1], v[2]), w);
            }),
            1e-4);
}

TEST(AutodiffOps, RandomThreeLayerNetwork) {
  Rng rng = make_rng(5, "mlp");
  ParameterStore store;
  std::vector<Dense> layers = {make_dense(store, "l1", 5, 7), make_dense(store, "l2", 7, 6),
                               make_dense(store, "l3", 6, 4)};
  initialize_uniform(store, 5);
  Matrix x(3, 5);
  for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = standard_normal(rng);
  const std::vector<int> targets = {1, 3, 0};
  std::vector<Parameter*> params;
  for (std::size_t i = 0; i < store.size(); ++i) params.push_back(&store[i]);
  const double gap = gradient_gap(params, [&](Tape& t, std::vector<Var>&) {
    Var a = t.constant(x);
    a = relu(layers[0](t, a));
    a = relu(layers[1](t, a));
    return cross_entropy(layers[2](t, a), targets);
  }, false);
  EXPECT_LT(gap, 1e-4);
}

TEST(Autodiff, SoftmaxRowsSumToOne) {
  Rng rng = make_rng(6, "softmax");
  Tape tape(false);
  Matrix m(4, 16);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = 20 * standard_normal(rng);
  const Matrix s = softmax_rows(tape.constant(m)).value();
  for (Eigen::Index r = 0; r < s.rows(); ++r) EXPECT_NEAR(s.row(r).sum(), 1.0, 1e-6);
}

TEST(Autodiff, NonFiniteForwardIsAnError) {
  Parameter a("a", 1, 1);
  a.value(0, 0) = 1000.0;
  Tape tape;
  EXPECT_THROW(exp(tape.param(a)), NonFiniteError);
}

TEST(Autodiff, NonFiniteGradientNamesTheOperation) {
  // Finite forward values whose gradient overflows on the way back to tanh.
  Parameter a("a", 1, 1);
  Tape tape;
  const Var huge = tape.constant(Matrix::Constant(1, 1, std::numeric_limits<double>::max()));
  const Var loss = sum(scale(mul(tanh(tape.param(a)), huge), 10.0));
  try {
    tape.backward(loss);
    FAIL() << "expected NonFiniteError";
  } catch (const NonFiniteError& e) {
    EXPECT_NE(std::string(e.what()).find("tanh"), std::string::npos) << e.what();
  }
}

TEST(Autodiff, DropoutRateAndEvalIdentity) {
  Rng rng = make_rng(7, "dropout");
  Tape tape(false);
  const Var ones = tape.constant(Matrix::Ones(100, 100));
  const Matrix dropped = dropout(ones, 0.5, rng).value();
  const auto zeros = (dropped.array() == 0.0).count();
  // Binomial(10000, 0.5): five standard deviations is 250.
  EXPECT_NEAR(static_cast<double>(zeros), 5000.0, 250.0);
  EXPECT_TRUE(((dropped.array() == 0.0) || (dropped.array() == 2.0)).all());
  EXPECT_EQ(dropout(ones, 0.0, rng).value(), Matrix::Ones(100, 100));
}

TEST(Autodiff, GradientsAccumulateAcrossBackwardCalls) {
  Parameter a("a", 1, 2);
  a.value << 1.0, 2.0;
  for (int i = 0; i < 2; ++i) {
    Tape tape;
    tape.backward(sum(scale(tape.param(a), 3.0)));
  }
  EXPECT_EQ(a.grad(0, 0), 6.0);
  EXPECT_EQ(a.grad(0, 1), 6.0);
}

}  // namespace
}  // namespace levelblend::ad
