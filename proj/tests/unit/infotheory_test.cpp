// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "idel/errors.hpp"
#include "idel/infotheory/discrete.hpp"
#include "idel/infotheory/gaussian.hpp"
#include "idel/numcore/numcore.hpp"

namespace idel::info {
namespace {

using num::Rng;
using num::Tensor;

const double kLn2 = std::log(2.0);
const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// Independent oracle: I = sum p log(p / (px py)) by a direct double loop.
double naive_mi(const JointDiscrete& j) {
  std::vector<double> px(j.nx(), 0.0), py(j.ny(), 0.0);
  for (std::size_t a = 0; a < j.nx(); ++a)
    for (std::size_t b = 0; b < j.ny(); ++b) {
      px[a] += j(a, b);
      py[b] += j(a, b);
    }
  double mi = 0.0;
  for (std::size_t a = 0; a < j.nx(); ++a)
    for (std::size_t b = 0; b < j.ny(); ++b)
      if (j(a, b) > 0.0) mi += j(a, b) * std::log(j(a, b) / (px[a] * py[b]));
  return mi;
}

std::vector<double> random_simplex(std::size_t n, Rng& rng, double zero_rate = 0.15) {
  std::vector<double> p(n);
  double z = 0.0;
  for (auto& v : p) {
    v = rng.uniform() < zero_rate ? 0.0 : -std::log(rng.uniform());
    z += v;
  }
  if (z == 0.0) {
    p[0] = 1.0;
    z = 1.0;
  }
  for (auto& v : p) v /= z;
  return p;
}

JointDiscrete3 random_joint3(Rng& rng) {
  const std::size_t nx = 2 + rng.index(3), ny = 2 + rng.index(3), nz = 2 + rng.index(3);
  return JointDiscrete3(nx, ny, nz, random_simplex(nx * ny * nz, rng));
}

TEST(EntropyTest, Examples) {
  EXPECT_NEAR(entropy(std::vector<double>{0.5, 0.5}), kLn2, 1e-15);
  EXPECT_EQ(entropy(std::vector<double>{0.0, 1.0, 0.0}), 0.0);
  EXPECT_NEAR(entropy(std::vector<double>{0.25, 0.75}), 0.562335144618808, 1e-12);
  EXPECT_THROW(entropy(std::vector<double>{-0.1, 1.1}), ContractError);
}

TEST(JointDiscreteTest, RejectsInvalidTables) {
  EXPECT_THROW(JointDiscrete(2, 2, {0.5, 0.5, 0.5, 0.5}), ContractError);
  EXPECT_THROW(JointDiscrete(2, 2, {1.1, -0.1, 0.0, 0.0}), ContractError);
  EXPECT_THROW(JointDiscrete(2, 2, {1.0}), ContractError);
  EXPECT_THROW(JointDiscrete(kMaxAlphabet + 1, 1, std::vector<double>(kMaxAlphabet + 1, 1.0 / 65)), ContractError);
}

TEST(MutualInformationTest, Examples) {
  const std::vector<double> px{0.3, 0.7}, py{0.2, 0.5, 0.3};
  EXPECT_NEAR(mutual_information(JointDiscrete::independent(px, py)), 0.0, 1e-15);
  EXPECT_NEAR(mutual_information(JointDiscrete(2, 2, {0.5, 0.0, 0.0, 0.5})), kLn2, 1e-15);
  // 0.8 ln 1.6 + 0.2 ln 0.4
  EXPECT_NEAR(mutual_information(JointDiscrete(2, 2, {0.4, 0.1, 0.1, 0.4})), 0.192744757021758, 1e-12);
}

TEST(MutualInformationTest, MatchesNaiveSumAndIsBounded) {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const std::size_t nx = 1 + rng.index(6), ny = 1 + rng.index(6);
    const JointDiscrete j(nx, ny, random_simplex(nx * ny, rng));
    const double mi = mutual_information(j);
    EXPECT_NEAR(mi, naive_mi(j), 1e-12);
    EXPECT_GE(mi, 0.0);
    EXPECT_LE(mi, std::min(entropy(j.marginal_x()), entropy(j.marginal_y())) + 1e-12);
  }
}

TEST(VariationOfInformationTest, Examples) {
  EXPECT_NEAR(variation_of_information(JointDiscrete(2, 2, {0.5, 0.0, 0.0, 0.5})), 0.0, 1e-15);
  EXPECT_NEAR(variation_of_information(JointDiscrete(2, 2, {0.25, 0.25, 0.25, 0.25})), 2 * kLn2, 1e-15);
  // 2 ln 2 - 2 * 0.192745...
  EXPECT_NEAR(variation_of_information(JointDiscrete(2, 2, {0.4, 0.1, 0.1, 0.4})), 1.000804847076376, 1e-12);
}

TEST(DisentanglementTest, IndependentFactorsGiveZero) {
  // x enumerates the pair (s, c) with s independent of c.
  const std::vector<double> ps{0.3, 0.7}, pc{0.1, 0.6, 0.3};
  std::vector<double> t(6 * 2 * 3, 0.0);
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t c = 0; c < 3; ++c) t[((s * 3 + c) * 2 + s) * 3 + c] = ps[s] * pc[c];
  const JointDiscrete3 xsc(6, 2, 3, t);
  EXPECT_NEAR(disentanglement_measure(xsc), 0.0, 1e-12);
  EXPECT_NEAR(disentanglement_identity_form(xsc), 0.0, 1e-12);
}

TEST(DisentanglementTest, IdenticalVariablesAgreeAcrossForms) {
  const std::vector<double> p{0.2, 0.5, 0.3};
  std::vector<double> t(27, 0.0);
  for (std::size_t i = 0; i < 3; ++i) t[(i * 3 + i) * 3 + i] = p[i];
  const JointDiscrete3 xsc(3, 3, 3, t);
  // Every VI term is zero.
  EXPECT_NEAR(disentanglement_measure(xsc), 0.0, 1e-12);
  EXPECT_NEAR(disentanglement_identity_form(xsc), 0.0, 1e-12);
}

TEST(DisentanglementTest, TwoFormsAgreeOnRandomJoints) {
  Rng rng(2024);
  for (int t = 0; t < 100; ++t) {
    const auto j = random_joint3(rng);
    const double vi_form = disentanglement_measure(j);
    EXPECT_NEAR(vi_form, disentanglement_identity_form(j), 1e-10);
    // Entropy-only oracle: VI(a;b) = 2 H(a,b) - H(a) - H(b).
    auto vi = [](const JointDiscrete& ab) {
      return 2 * entropy(ab.table()) - entropy(ab.marginal_x()) - entropy(ab.marginal_y());
    };
    EXPECT_NEAR(vi_form, vi(j.xy()) + vi(j.xz()) - vi(j.yz()), 1e-10);
    EXPECT_GE(vi_form, -1e-10);
  }
}

TEST(VariationOfInformationTest, TriangleInequality) {
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const auto j = random_joint3(rng);
    const double vi_yx = variation_of_information(j.xy());
    const double vi_xz = variation_of_information(j.xz());
    const double vi_yz = variation_of_information(j.yz());
    EXPECT_GE(vi_yx + vi_xz, vi_yz - 1e-10);
  }
}

TEST(MutualInformationTest, DataProcessingInequality) {
  Rng rng(99);
  for (int t = 0; t < 100; ++t) {
    const std::size_t ns = 2 + rng.index(4), nx = 2 + rng.index(4), ny = 2 + rng.index(4);
    const auto ps = random_simplex(ns, rng, 0.0);
    std::vector<std::vector<double>> x_given_s(ns), y_given_x(nx);
    for (auto& row : x_given_s) row = random_simplex(nx, rng);
    for (auto& row : y_given_x) row = random_simplex(ny, rng);
    std::vector<double> sx(ns * nx, 0.0), sy(ns * ny, 0.0);
    for (std::size_t s = 0; s < ns; ++s)
      for (std::size_t x = 0; x < nx; ++x) {
        sx[s * nx + x] = ps[s] * x_given_s[s][x];
        for (std::size_t y = 0; y < ny; ++y) sy[s * ny + y] += ps[s] * x_given_s[s][x] * y_given_x[x][y];
      }
    EXPECT_GE(mutual_information(JointDiscrete(ns, nx, sx)), mutual_information(JointDiscrete(ns, ny, sy)) - 1e-10);
  }
}

TEST(GaussianMiTest, Examples) {
  EXPECT_EQ(gaussian_mi({{0.0}}), 0.0);
  EXPECT_NEAR(gaussian_mi({{0.8}}), 0.510825623765991, 1e-12);
  EXPECT_NEAR(gaussian_mi({{0.5, 0.5}}), 0.287682072451781, 1e-12);
  EXPECT_THROW(gaussian_mi({{1.0}}), DomainError);
  EXPECT_THROW(gaussian_mi({{0.2, -1.5}}), DomainError);
}

TEST(GaussianLogProbTest, Examples) {
  const auto std1 = DiagGaussian::standard(1);
  EXPECT_NEAR(gaussian_log_prob(std1, Tensor::vector({0.0})).item(), -kHalfLog2Pi, 1e-15);
  EXPECT_NEAR(gaussian_log_prob(std1, Tensor::vector({1.0})).item(), -kHalfLog2Pi - 0.5, 1e-15);
  const DiagGaussian g{Tensor::vector({1.0}), Tensor::vector({2.0})};
  EXPECT_NEAR(gaussian_log_prob(g, Tensor::vector({0.0})).item(), -kHalfLog2Pi - 1.0 - 0.5 * std::exp(-2.0), 1e-14);
  EXPECT_THROW(gaussian_log_prob(std1, Tensor::vector({0.0, 1.0})), DimensionError);
}

TEST(GaussianLogProbTest, BatchedRowsMatchSingleRows) {
  const DiagGaussian g{Tensor::matrix(2, 2, {0.1, -0.3, 1.0, 2.0}), Tensor::matrix(2, 2, {0.0, 0.5, -1.0, 0.2})};
  const Tensor x = Tensor::matrix(2, 2, {0.4, 0.0, -1.0, 3.0});
  const Tensor lp = gaussian_log_prob(g, x);
  ASSERT_EQ(lp.shape(), (num::Shape{2}));
  for (std::size_t r = 0; r < 2; ++r) {
    const DiagGaussian row{Tensor::vector({g.mean.at(r, 0), g.mean.at(r, 1)}),
                           Tensor::vector({g.log_var.at(r, 0), g.log_var.at(r, 1)})};
    EXPECT_DOUBLE_EQ(lp.at(r), gaussian_log_prob(row, Tensor::vector({x.at(r, 0), x.at(r, 1)})).item());
  }
}

TEST(GaussianKlTest, Examples) {
  EXPECT_EQ(gaussian_kl_to_standard(DiagGaussian::standard(3)).item(), 0.0);
  EXPECT_NEAR(gaussian_kl_to_standard({Tensor::vector({1.0}), Tensor::vector({0.0})}).item(), 0.5, 1e-15);
  EXPECT_NEAR(gaussian_kl_to_standard({Tensor::vector({0.0}), Tensor::vector({std::log(4.0)})}).item(),
              0.806852819440055, 1e-12);
}

TEST(GaussianKlTest, NonNegativeOnRandomDistributions) {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 1 + rng.index(5);
    const DiagGaussian g{Tensor::vector(rng.normals(d)), Tensor::vector(rng.normals(d))};
    EXPECT_GT(gaussian_kl_to_standard(g).item(), 0.0);
  }
}

TEST(ReparamTest, Examples) {
  const DiagGaussian g{Tensor::vector({1.0, -2.0}), Tensor::vector({0.3, 0.7})};
  EXPECT_EQ(reparam_sample(g, Tensor::vector({0.0, 0.0})).at(1), -2.0);
  const Tensor z = Tensor::vector({0.3, -1.1});
  EXPECT_EQ(reparam_sample(DiagGaussian::standard(2), z).at(0), 0.3);
  EXPECT_EQ(reparam_sample(DiagGaussian::standard(2), z).at(1), -1.1);
  EXPECT_NEAR(reparam_sample({Tensor::vector({1.0}), Tensor::vector({std::log(4.0)})}, Tensor::vector({1.0})).item(),
              3.0, 1e-15);
  EXPECT_THROW(reparam_sample(g, Tensor::vector({0.0})), DimensionError);
}

TEST(ReparamTest, GradientReachesMeanAndLogVar) {
  const Tensor mu = Tensor::vector({0.5}, true);
  const Tensor lv = Tensor::vector({std::log(4.0)}, true);
  num::sum(reparam_sample({mu, lv}, Tensor::vector({1.5}))).backward();
  EXPECT_EQ(mu.grad()[0], 1.0);
  // d/dlv exp(lv/2) * z = z * sigma / 2
  EXPECT_NEAR(lv.grad()[0], 1.5 * 2.0 / 2.0, 1e-15);
}

TEST(GaussianPairTest, SampleMomentsMatchSpec) {
  const GaussianPairSpec spec{{0.0, 0.3, 0.8}};
  Rng rng(31337);
  const std::size_t n = 100000;
  const auto batch = sample_gaussian_pairs(spec, n, rng);
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < spec.dim(); ++i) {
    double ms = 0, mc = 0, ss = 0, cc = 0, sc = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double s = batch.s.at(j, i), c = batch.c.at(j, i);
      ms += s, mc += c, ss += s * s, cc += c * c, sc += s * c;
    }
    ms /= dn, mc /= dn, ss /= dn, cc /= dn, sc /= dn;
    const double se_mean = 1.0 / std::sqrt(dn), se_var = std::sqrt(2.0 / dn);
    const double rho = spec.rho[i];
    EXPECT_NEAR(ms, 0.0, 3 * se_mean);
    EXPECT_NEAR(mc, 0.0, 3 * se_mean);
    EXPECT_NEAR(ss - ms * ms, 1.0, 3 * se_var);
    EXPECT_NEAR(cc - mc * mc, 1.0, 3 * se_var);
    EXPECT_NEAR(sc - ms * mc, rho, 3 * std::sqrt((1 + rho * rho) / dn));
  }
}

TEST(GaussianPairTest, TrueConditionalIsAffineInContent) {
  const GaussianPairSpec spec{{0.8}};
  const auto g = true_conditional(spec, Tensor::matrix(2, 1, {1.0, -2.0}));
  EXPECT_NEAR(g.mean.at(0, 0), 0.8, 1e-15);
  EXPECT_NEAR(g.mean.at(1, 0), -1.6, 1e-15);
  EXPECT_NEAR(std::exp(g.log_var.at(1, 0)), 0.36, 1e-15);
}

}  // namespace
}  // namespace idel::info
