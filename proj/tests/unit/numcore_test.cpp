// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "idel/errors.hpp"
#include "idel/numcore/numcore.hpp"

namespace idel::num {
namespace {

std::vector<double> values(const Tensor& t) { return {t.data().begin(), t.data().end()}; }

Tensor random_tensor(Shape shape, Rng& rng, bool requires_grad = true, double lo = -1.5, double hi = 1.5) {
  std::vector<double> v(shape_size(shape));
  for (auto& x : v) x = lo + (hi - lo) * rng.uniform();
  return Tensor(std::move(shape), std::move(v), requires_grad);
}

TEST(TensorTest, ShapeMustHoldData) {
  EXPECT_THROW(Tensor({2, 2}, {1, 2, 3}), DimensionError);
  EXPECT_THROW(Tensor({0}, {}), DimensionError);
  const Tensor s = Tensor::scalar(3.0);
  EXPECT_EQ(s.rank(), 0u);
  EXPECT_EQ(s.item(), 3.0);
}

TEST(OpsTest, ElementwiseExamples) {
  EXPECT_EQ(values(add(Tensor::vector({1, 2}), Tensor::vector({3, 4}))), (std::vector<double>{4, 6}));
  EXPECT_EQ(values(relu(Tensor::vector({-1, 0, 2}))), (std::vector<double>{0, 0, 2}));
  const Tensor eye = Tensor::matrix(2, 2, {1, 0, 0, 1});
  const Tensor m = Tensor::matrix(2, 2, {5, 6, 7, 8});
  EXPECT_EQ(values(matmul(eye, m)), values(m));
}

TEST(OpsTest, ShapeMismatchNamesOperation) {
  try {
    matmul(Tensor::matrix(2, 3, std::vector<double>(6, 1.0)), Tensor::matrix(2, 3, std::vector<double>(6, 1.0)));
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    EXPECT_NE(std::string(e.what()).find("matmul"), std::string::npos);
  }
  EXPECT_THROW(add(Tensor::vector({1, 2}), Tensor::vector({1, 2, 3})), DimensionError);
  EXPECT_THROW(concat(Tensor::matrix(2, 1, {1, 2}), Tensor::matrix(3, 1, {1, 2, 3})), DimensionError);
  EXPECT_THROW(slice(Tensor::vector({1, 2}), 1, 3), DimensionError);
}

TEST(OpsTest, RowBroadcastAddsBiasToEveryRow) {
  const Tensor x = Tensor::matrix(2, 2, {1, 2, 3, 4});
  EXPECT_EQ(values(add(x, Tensor::vector({10, 20}))), (std::vector<double>{11, 22, 13, 24}));
}

TEST(OpsTest, LogSoftmaxRowsNormalize) {
  const Tensor y = log_softmax(Tensor::matrix(2, 3, {1, 2, 3, -1, 0, 500}));
  for (std::size_t r = 0; r < 2; ++r) {
    double z = 0.0;
    for (std::size_t c = 0; c < 3; ++c) z += std::exp(y.at(r, c));
    EXPECT_NEAR(z, 1.0, 1e-14);
  }
}

TEST(BackwardTest, SquareSum) {
  Tensor x = Tensor::vector({1, 2, 3}, true);
  sum(x * x).backward();
  EXPECT_EQ(std::vector<double>(x.grad().begin(), x.grad().end()), (std::vector<double>{2, 4, 6}));
}

TEST(BackwardTest, ConstantGraphLeavesGradientsZero) {
  Tensor x = Tensor::vector({1, 2, 3}, true);
  x.zero_grad();
  const Tensor c = sum(Tensor::vector({4, 5}));
  c.backward();
  for (double g : x.grad()) EXPECT_EQ(g, 0.0);
}

TEST(BackwardTest, TanhAtZeroWeightGivesInput) {
  Tensor w = Tensor::matrix(1, 3, {0, 0, 0}, true);
  const Tensor x = Tensor::matrix(3, 1, {0.5, -2, 3});
  sum(tanh(matmul(w, x))).backward();
  EXPECT_EQ(std::vector<double>(w.grad().begin(), w.grad().end()), (std::vector<double>{0.5, -2, 3}));
}

TEST(BackwardTest, NonScalarLossIsContractError) {
  Tensor x = Tensor::vector({1, 2}, true);
  EXPECT_THROW((x * x).backward(), ContractError);
}

TEST(BackwardTest, RetainedGraphAccumulatesAdditively) {
  Tensor x = Tensor::vector({0.3, -0.7}, true);
  const Tensor loss = sum(exp(x) * x);
  loss.backward(GraphRetention::kRetain);
  const std::vector<double> once(x.grad().begin(), x.grad().end());
  loss.backward(GraphRetention::kRetain);
  for (std::size_t i = 0; i < once.size(); ++i) EXPECT_DOUBLE_EQ(x.grad()[i], 2.0 * once[i]);
}

TEST(BackwardTest, FreedGraphBecomesConstant) {
  Tensor x = Tensor::vector({0.3, -0.7}, true);
  const Tensor loss = sum(x * x);
  loss.backward();
  EXPECT_FALSE(loss.requires_grad());
  const std::vector<double> once(x.grad().begin(), x.grad().end());
  loss.backward();
  EXPECT_EQ(std::vector<double>(x.grad().begin(), x.grad().end()), once);
}

TEST(BackwardTest, SharedSubexpressionAccumulates) {
  Tensor x = Tensor::scalar(2.0, true);
  const Tensor y = x * x;
  (y + y).backward();
  EXPECT_DOUBLE_EQ(x.grad()[0], 8.0);
}

// Every differentiable op against central differences on random inputs.
TEST(GradCheckTest, AllOpsMatchFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    Tensor a = random_tensor({3, 4}, rng);
    Tensor b = random_tensor({3, 4}, rng);
    Tensor v = random_tensor({4}, rng);
    Tensor w = random_tensor({4, 2}, rng);
    Tensor pos = random_tensor({3, 4}, rng, true, 0.5, 2.0);
    Tensor lv = random_tensor({2, 4}, rng);
    Tensor mu = random_tensor({2, 4}, rng);
    const std::vector<std::size_t> rows{2, 0, 2, 1};
    const std::vector<std::size_t> offsets{0, 1, 4};
    const std::vector<std::size_t> pair{0, 1};
    const std::vector<std::size_t> flat{0, 5, 5, 11};
    std::vector<Tensor> params{a, b, v, w, pos, lv, mu};
    const auto loss = [&]() {
      Tensor t = sum(add(a, b) * sub(a, v));
      t = t + sum(matmul(tanh(a), w));
      t = t + sum(log(pos)) + mean(exp(scale(b, 0.5)));
      t = t + sum(relu(a) * square(b)) + sum(clamp(a * 3.0, -2.0, 2.0));
      t = t + sum(log_softmax(a) * b);
      t = t + sum(row_sum(concat(a, slice(b, 1, 3))));
      t = t + sum(segment_mean(index_rows(a, rows), offsets) * index_rows(b, pair));
      t = t + sum(take(b * a, flat));
      t = t + mean(pairwise_gaussian_log_prob(a, mu, lv));
      return add_scalar(neg(t), 1.0);
    };
    const auto report = gradcheck(loss, params);
    EXPECT_LT(report.max_rel_error, 1e-6) << "seed " << seed << " param " << report.worst_param;
  }
}

TEST(AdamTest, FirstStepMovesByLearningRate) {
  Tensor p = Tensor::vector({1.0}, true);
  Adam opt({p}, {.lr = 0.1});
  p.mutable_grad()[0] = 1.0;
  opt.step();
  EXPECT_NEAR(p.data()[0], 0.9, 1e-8);
  EXPECT_EQ(opt.state().step, 1u);
  EXPECT_EQ(p.grad()[0], 0.0);
}

TEST(AdamTest, ZeroGradientLeavesParameterButCountsStep) {
  Tensor p = Tensor::vector({1.0}, true);
  Adam opt({p}, {.lr = 0.1});
  opt.zero_grad();
  opt.step();
  EXPECT_EQ(p.data()[0], 1.0);
  EXPECT_EQ(opt.state().step, 1u);
}

TEST(AdamTest, RepeatedPositiveGradientDecreasesMonotonically) {
  Tensor p = Tensor::vector({1.0}, true);
  Adam opt({p}, {.lr = 0.1});
  double prev = p.data()[0];
  for (int i = 0; i < 2; ++i) {
    p.mutable_grad()[0] = 1.0;
    opt.step();
    EXPECT_LT(p.data()[0], prev);
    prev = p.data()[0];
  }
}

TEST(AdamTest, MissingGradientIsContractError) {
  Tensor p = Tensor::vector({1.0}, true);
  Adam opt({p});
  EXPECT_THROW(opt.step(), ContractError);
  EXPECT_THROW(Adam({p}, {.lr = 0.0}), ContractError);
  EXPECT_THROW(Adam({p}, {.beta1 = 1.0}), ContractError);
}

TEST(DeterminismTest, IdenticalInputsGiveIdenticalOutputs) {
  Rng r1(7), r2(7);
  const Tensor a = random_tensor({5, 3}, r1, false);
  const Tensor b = random_tensor({5, 3}, r2, false);
  EXPECT_EQ(values(log_softmax(matmul(a, Tensor::matrix(3, 2, {1, 2, 3, 4, 5, 6})))),
            values(log_softmax(matmul(b, Tensor::matrix(3, 2, {1, 2, 3, 4, 5, 6})))));
  EXPECT_NE(derive_seed(1, "corpus"), derive_seed(1, "init"));
}

}  // namespace
}  // namespace idel::num
