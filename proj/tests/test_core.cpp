#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "apcg/core/block_partition.hpp"
#include "apcg/core/oracles.hpp"
#include "apcg/core/regularizers.hpp"
#include "apcg/core/rng.hpp"
#include "apcg/core/weighted_norm.hpp"
#include "apcg/problems/quadratic.hpp"
#include "apcg/problems/relocation.hpp"
#include "oracles.hpp"

using namespace apcg;

TEST(BlockPartition, OffsetsAndBlocks) {
  BlockPartition p({2, 1, 3});
  EXPECT_EQ(p.num_blocks(), 3u);
  EXPECT_EQ(p.dimension(), 6u);
  EXPECT_EQ(p.offset(2), 3u);
  EXPECT_EQ(p.max_block_size(), 3u);
  EXPECT_FALSE(p.all_scalar());
  Vector x{0, 1, 2, 3, 4, 5};
  auto b = p.block(x, 2);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0], 3.0);
  EXPECT_TRUE(BlockPartition::scalar(4).all_scalar());
}

TEST(BlockPartition, RejectsEmptyBlockAndBadDimension) {
  EXPECT_THROW(BlockPartition({1, 0}), input_error);
  EXPECT_THROW(BlockPartition::scalar(3).check_dimension(4, "x"), input_error);
}

TEST(WeightedNorm, UnitWeightsGiveEuclidean) {
  auto p = BlockPartition::scalar(2);
  Vector x{3, 4}, w{1, 1};
  EXPECT_DOUBLE_EQ(weighted_norm(x, w, p), 5.0);
}

TEST(WeightedNorm, BlockWeights) {
  BlockPartition p({1, 1});
  Vector x{1, 1}, w{4, 1};
  EXPECT_NEAR(weighted_norm(x, w, p), std::sqrt(5.0), 1e-15);
}

TEST(WeightedNorm, Errors) {
  auto p = BlockPartition::scalar(2);
  Vector x{1, 1}, bad{1, 0}, shortw{1};
  EXPECT_THROW(weighted_norm(x, bad, p), input_error);
  EXPECT_THROW(weighted_norm(x, shortw, p), input_error);
}

TEST(WeightedNorm, TriangleInequalityAndHomogeneity) {
  std::mt19937_64 g(3);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.1, 5.0);
  BlockPartition p({2, 3, 1});
  for (int t = 0; t < 200; ++t) {
    Vector x(6), y(6), s(6), w{ud(g), ud(g), ud(g)};
    for (int j = 0; j < 6; ++j) x[j] = nd(g), y[j] = nd(g), s[j] = x[j] + y[j];
    WeightedNorm nrm(w, p);
    EXPECT_LE(nrm(s), nrm(x) + nrm(y) + 1e-12);
    Vector sx = x;
    for (double& v : sx) v *= -2.5;
    EXPECT_NEAR(nrm(sx), 2.5 * nrm(x), 1e-12);
  }
}

TEST(BlockSampler, DeterministicAndInRange) {
  BlockSampler a(42), b(42);
  std::vector<int> counts(7, 0);
  for (int t = 0; t < 7000; ++t) {
    const auto i = a(7);
    ASSERT_EQ(i, b(7));
    ASSERT_LT(i, 7u);
    ++counts[i];
  }
  for (int c : counts) EXPECT_GT(c, 800);
}

TEST(Regularizers, ProxesMatchGridOracle) {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> cd(-3, 3), wd(0.2, 5);
  L1Regularizer l1(0.7);
  BoxIndicator box(-0.5, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const double c = cd(g), w = wd(g);
    double out;
    l1.prox_block(0, std::span<const double>(&c, 1), w, std::span<double>(&out, 1));
    const double ref = oracle::golden_min(
        [&](double h) { return 0.5 * w * (h - c) * (h - c) + 0.7 * std::abs(h); }, -4, 4);
    EXPECT_NEAR(out, ref, 1e-6);
    box.prox_block(0, std::span<const double>(&c, 1), w, std::span<double>(&out, 1));
    const double refb =
        oracle::golden_min([&](double h) { return (h - c) * (h - c); }, -0.5, 1.0);
    EXPECT_NEAR(out, refb, 1e-6);
  }
}

TEST(Regularizers, GroupProxMatchesOracle) {
  GroupL2Regularizer gl(0.8);
  const double w = 2.0;
  Vector c{0.9, -0.3}, out(2);
  gl.prox_block(0, c, w, out);
  const auto ref = oracle::grid_min_2d(
      [&](double a, double b) {
        return 0.5 * w * ((a - c[0]) * (a - c[0]) + (b - c[1]) * (b - c[1])) +
               0.8 * std::hypot(a, b);
      },
      -2, 2, -2, 2, 1e-7);
  EXPECT_NEAR(out[0], ref.first, 1e-5);
  EXPECT_NEAR(out[1], ref.second, 1e-5);
  Vector small{0.1, 0.1};
  gl.prox_block(0, small, w, out);
  EXPECT_EQ(out[0], 0.0);
  EXPECT_EQ(out[1], 0.0);
}

TEST(Regularizers, BoxEvalOutsideIsInfinite) {
  BoxIndicator box(0, 1);
  Vector in{0.5}, out{1.5};
  EXPECT_EQ(box.eval_block(0, in), 0.0);
  EXPECT_EQ(box.eval_block(0, out), infinity);
  EXPECT_EQ(eval_full(box, BlockPartition::scalar(1), out), infinity);
}

TEST(Regularizers, BlockProxValidates) {
  L1Regularizer l1(1.0);
  Vector c{1.0}, o(1), bad{NAN};
  EXPECT_THROW(block_prox(l1, 0, c, 0.0, o), input_error);
  EXPECT_THROW(block_prox(l1, 0, bad, 1.0, o), input_error);
  block_prox(l1, 0, c, 4.0, o);
  EXPECT_DOUBLE_EQ(o[0], 0.75);
}

TEST(Quadratic, ConstantsAndGradient) {
  auto f = random_diagonally_dominant_quadratic(8, 5, 0.5, BlockPartition({3, 5}));
  const auto& Q = f.hessian();
  EXPECT_GT(f.mu(), 0.0);
  EXPECT_LE(f.mu(), 1.0);
  Vector x(8, 0.3), g(8), gi(5);
  x[2] = -1.0;
  f.gradient(x, g);
  f.partial_gradient(x, 1, gi);
  for (int j = 0; j < 5; ++j) EXPECT_NEAR(gi[j], g[3 + j], 1e-13);
  // block Lipschitz: top eigenvalue of the diagonal block
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q.block(3, 3, 5, 5));
  EXPECT_NEAR(f.lipschitz()[1], es.eigenvalues().maxCoeff(), 1e-12);
  // strong convexity in the L-norm: f(y) >= f(x) + <g, y-x> + mu/2 ||y-x||_L^2
  std::mt19937_64 r(1);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 100; ++t) {
    Vector y(8);
    for (double& v : y) v = nd(r);
    Vector d(8);
    for (int j = 0; j < 8; ++j) d[j] = y[j] - x[j];
    const double wn = weighted_norm(d, f.lipschitz(), f.partition());
    EXPECT_GE(f.value(y), f.value(x) + dot(g, d) + 0.5 * f.mu() * wn * wn - 1e-10);
  }
}

TEST(Relocation, SumIsPreservedAndProxIsExact) {
  auto f = random_diagonally_dominant_quadratic(4, 9);
  L1Regularizer base(0.3);
  const double mu_psi = 0.5;
  Vector x0{0.2, -0.1, 0.0, 0.4}, s0(4);
  for (int j = 0; j < 4; ++j)
    s0[j] = 0.3 * (x0[j] > 0 ? 1 : (x0[j] < 0 ? -1 : 0)) + mu_psi * x0[j];
  RelocatedRegularizer<L1Regularizer> psi(base, mu_psi, f.partition(), x0, s0);
  double psi0 = 0;
  for (int i = 0; i < 4; ++i) psi0 += psi.original_block(i, std::span<const double>(&x0[i], 1));
  RelocatedSmooth<QuadraticSmooth> ft(f, 0.0, mu_psi, x0, s0, psi0);
  EXPECT_NEAR(ft.lipschitz()[0], f.lipschitz()[0] + mu_psi, 1e-15);

  Vector x{1.0, -2.0, 0.5, 0.0};
  double orig = f.value(x);
  for (int i = 0; i < 4; ++i) orig += psi.original_block(i, std::span<const double>(&x[i], 1));
  const double moved = ft.value(x) + eval_full(psi, f.partition(), x);
  EXPECT_NEAR(moved, orig, 1e-12);

  // prox of the relocated term vs scalar oracle
  for (double c : {-1.0, -0.1, 0.05, 0.7}) {
    for (std::size_t i = 0; i < 4; ++i) {
      double out;
      psi.prox_block(i, std::span<const double>(&c, 1), 1.7, std::span<double>(&out, 1));
      const double ref = oracle::golden_min(
          [&](double h) {
            return 0.85 * (h - c) * (h - c) + psi.eval_block(i, std::span<const double>(&h, 1));
          },
          -5, 5);
      EXPECT_NEAR(out, ref, 1e-6);
    }
  }
}
