#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "apcg/core/regularizers.hpp"
#include "apcg/problems/quadratic.hpp"
#include "apcg/problems/relocation.hpp"
#include "apcg/solver/diagnostics.hpp"
#include "apcg/solver/efficient.hpp"
#include "apcg/solver/explicit.hpp"
#include "apcg/solver/solve.hpp"
#include "oracles.hpp"

using namespace apcg;

namespace {

QuadraticSmooth identity_quadratic(Vector center) {
  const auto n = static_cast<Eigen::Index>(center.size());
  Eigen::VectorXd b = Eigen::Map<Eigen::VectorXd>(center.data(), n);
  return QuadraticSmooth(Eigen::MatrixXd::Identity(n, n), b, BlockPartition::scalar(center.size()));
}

Vector start_point(std::size_t N) {
  Vector x(N);
  for (std::size_t j = 0; j < N; ++j) x[j] = std::sin(1.0 + double(j));
  return x;
}

}  // namespace

TEST(ApcgGeneral, FirstGradientPointIsStart) {
  auto f = random_diagonally_dominant_quadratic(6, 1);
  L1Regularizer psi(0.1);
  CompositeProblem prob(f, psi);
  ApcgExplicitState s(start_point(6));
  ApcgSchedule sched(6, f.mu(), 1.0);
  apcg_step_general(prob, s, sched, 2);
  EXPECT_LE(max_abs_diff(s.y, start_point(6)), 1e-15);
}

TEST(ApcgGeneral, StationaryPointIsFixed) {
  Vector xs{0.3, -1.2, 2.0};
  auto f = identity_quadratic(xs);
  ZeroRegularizer psi;
  CompositeProblem prob(f, psi);
  ApcgExplicitState g(xs), sc(xs), nsc(xs);
  ApcgEfficientState ef(xs, std::sqrt(f.mu()) / 3);
  ApcgSchedule sched(3, f.mu(), 1.0);
  double a = 1.0 / 3;
  for (std::size_t k = 0; k < 30; ++k) {
    const std::size_t i = k % 3;
    apcg_step_general(prob, g, sched, i);
    apcg_step_sc(prob, sc, std::sqrt(f.mu()) / 3, i);
    a = apcg_step_nsc(prob, nsc, a, i);
    apcg_step_efficient(prob, ef, i);
  }
  EXPECT_LE(max_abs_diff(g.x, xs), 1e-15);
  EXPECT_LE(max_abs_diff(sc.x, xs), 1e-15);
  EXPECT_LE(max_abs_diff(nsc.x, xs), 1e-15);
  EXPECT_LE(max_abs_diff(ef.x(), xs), 1e-15);
}

// f = 1/2 ||x||^2 on two scalar blocks: L = (1, 1), mu = 1, gamma0 = 1.
// Hand evaluation: alpha0 = 1/2, gamma1 = 1, beta0 = 1/2, y0 = (1, 1);
// block 0 center 1 - 1/(n alpha0 L) = 0, so z1 = (0, 1) and
// x1 = (1 + 1*(0 - 1) + 1/2*0, 1) = (0, 1).
TEST(ApcgGeneral, TwoBlockHandEvaluation) {
  auto f = identity_quadratic({0.0, 0.0});
  ZeroRegularizer psi;
  CompositeProblem prob(f, psi);
  ASSERT_DOUBLE_EQ(f.mu(), 1.0);
  ApcgExplicitState s(Vector{1.0, 1.0});
  ApcgSchedule sched(2, 1.0, 1.0);
  apcg_step_general(prob, s, sched, 0);
  EXPECT_DOUBLE_EQ(sched.alpha(0), 0.5);
  EXPECT_DOUBLE_EQ(sched.beta(0), 0.5);
  EXPECT_DOUBLE_EQ(s.z[0], 0.0);
  EXPECT_DOUBLE_EQ(s.z[1], 1.0);
  EXPECT_DOUBLE_EQ(s.x[0], 0.0);
  EXPECT_DOUBLE_EQ(s.x[1], 1.0);
}

TEST(ApcgStronglyConvex, RequiresPositiveMu) {
  Eigen::MatrixXd Q(2, 2);
  Q << 1, 1, 1, 1;
  QuadraticSmooth f(Q, Eigen::VectorXd::Zero(2), BlockPartition::scalar(2));
  ZeroRegularizer psi;
  CompositeProblem prob(f, psi);
  ApcgExplicitState s(Vector{1.0, 0.0});
  EXPECT_THROW(apcg_step_sc(prob, s, 0.1, std::size_t{0}), config_error);
  SolveOptions o;
  o.variant = Variant::efficient;
  o.max_iters = 1;
  EXPECT_THROW(solve(prob, Vector{1.0, 0.0}, o), config_error);
}

TEST(ApcgStronglyConvex, MatchesGeneralWithGammaEqualMu) {
  auto f = random_diagonally_dominant_quadratic(12, 4, 0.6, BlockPartition::uniform(4, 3));
  L1Regularizer psi(0.2);
  CompositeProblem prob(f, psi);
  const std::size_t n = 4;
  ApcgExplicitState g(start_point(12)), sc(start_point(12));
  ApcgSchedule sched(n, f.mu(), f.mu());
  BlockSampler r1(7), r2(7);
  for (int k = 0; k < 400; ++k) {
    apcg_step_general(prob, g, sched, r1);
    apcg_step_sc(prob, sc, std::sqrt(f.mu()) / n, r2);
    ASSERT_LE(max_abs_diff(g.x, sc.x), 1e-10) << k;
    ASSERT_LE(max_abs_diff(g.z, sc.z), 1e-10) << k;
  }
}

TEST(ApcgNonStronglyConvex, MatchesGeneralWithZeroMu) {
  Eigen::MatrixXd B = Eigen::MatrixXd::Random(6, 8);
  Eigen::MatrixXd Q = B.transpose() * B;  // rank 6, so mu = 0
  QuadraticSmooth f(Q, Eigen::VectorXd::Ones(8), BlockPartition::scalar(8));
  EXPECT_LT(f.mu(), 1e-12);
  BoxIndicator psi(-1.0, 1.0);
  CompositeProblem prob(f, psi);
  ApcgExplicitState g(Vector(8, 0.0)), s(Vector(8, 0.0));
  ApcgSchedule sched(8, 0.0, 0.5);
  double a = std::sqrt(0.5) / 8;
  for (std::size_t k = 0; k < 400; ++k) {
    const std::size_t i = (k * 5 + 3) % 8;
    apcg_step_general(prob, g, sched, i);
    a = apcg_step_nsc(prob, s, a, i);
    EXPECT_NEAR(a, sched.alpha(k), 1e-15);
    ASSERT_LE(max_abs_diff(g.x, s.x), 1e-10) << k;
  }
}

TEST(ApcgEfficient, StartReconstruction) {
  ApcgEfficientState s(Vector{1.0, -2.0}, 0.1);
  Vector y(2);
  s.y_point(y);
  EXPECT_EQ(y, (Vector{1.0, -2.0}));
  EXPECT_EQ(s.x(), (Vector{1.0, -2.0}));
  EXPECT_EQ(s.z(), (Vector{1.0, -2.0}));
}

TEST(ApcgEfficient, OneStepIncrementMatchesExplicitZStep) {
  Eigen::MatrixXd Q(2, 2);
  Q << 2.0, 0.5, 0.5, 1.0;
  Eigen::VectorXd b(2);
  b << 1.0, -1.0;
  QuadraticSmooth f(Q, b, BlockPartition::scalar(2));
  L1Regularizer psi(0.3);
  CompositeProblem prob(f, psi);
  const double alpha = std::sqrt(f.mu()) / 2;
  const Vector x0{0.4, 0.7};
  ApcgExplicitState sc(x0);
  ApcgEfficientState ef(x0, alpha);
  apcg_step_sc(prob, sc, alpha, std::size_t{1});
  apcg_step_efficient(prob, ef, std::size_t{1});
  // u^(1)_1 = -(1 - n alpha)/(2 rho) h, v^(1)_1 = x0_1 + (1 + n alpha)/2 h
  const double h = 2.0 * (ef.v[1] - x0[1]) / (1.0 + 2 * alpha);
  EXPECT_NEAR(h, sc.z[1] - x0[1], 1e-14);
  EXPECT_NEAR(ef.x()[1], sc.x[1], 1e-14);
  EXPECT_NEAR(ef.z()[1], sc.z[1], 1e-14);
}

TEST(ApcgEfficient, MatchesStronglyConvexAcrossRenormalization) {
  // rho ~ 0.36, so the global scale is folded back roughly every 230 steps
  auto f = random_diagonally_dominant_quadratic(2, 3, 0.05);
  ASSERT_GT(f.mu(), 0.8);
  L1Regularizer psi(0.1);
  CompositeProblem prob(f, psi);
  const double alpha = std::sqrt(f.mu()) / 2;
  ApcgExplicitState sc(start_point(2));
  ApcgEfficientState ef(start_point(2), alpha);
  BlockSampler r1(1), r2(1);
  for (int k = 0; k < 600; ++k) {
    apcg_step_sc(prob, sc, alpha, r1);
    apcg_step_efficient(prob, ef, r2);
    ASSERT_LE(max_abs_diff(ef.x(), sc.x), 1e-10) << k;
    ASSERT_LE(max_abs_diff(ef.z(), sc.z), 1e-10) << k;
    Vector y(2);
    ef.y_point(y);
    ASSERT_TRUE(all_finite(y));
  }
}

TEST(Diagnostics, ConvexCombinationAndPsiHat) {
  auto f = random_diagonally_dominant_quadratic(10, 21);
  L1Regularizer psi(0.1);
  CompositeProblem prob(f, psi);
  for (double g0 : {f.mu(), 0.5 * (f.mu() + 1.0), 1.0}) {
    ApcgSchedule sched(10, f.mu(), g0);
    BlockSampler rng(5);
    const auto h = record_general(prob, start_point(10), sched, rng, 300);
    EXPECT_LE(convex_combination_error(h, sched), 1e-8);
    EXPECT_LE(psi_hat_margin(prob, h, sched), 1e-10);
  }
}

TEST(Diagnostics, ThetaRequiresAdvancedSchedule) {
  ApcgSchedule s(3, 0.0, 1.0);
  EXPECT_THROW(theta_coefficients(s, 2), input_error);
  EXPECT_EQ(theta_coefficients(s, 0), (std::vector<double>{1.0}));
}

TEST(ApcgSingleBlock, ReproducesAcceleratedGradient) {
  auto f0 = random_diagonally_dominant_quadratic(5, 13, 0.7);
  const Eigen::MatrixXd& Q = f0.hessian();
  QuadraticSmooth f(Q, f0.linear_term(), BlockPartition({5}));
  ZeroRegularizer psi;
  CompositeProblem prob(f, psi);
  const double L = f.lipschitz()[0];
  Eigen::VectorXd x0(5);
  for (int j = 0; j < 5; ++j) x0(j) = std::cos(double(j));
  const auto ref = oracle::nesterov_quadratic(Q, f0.linear_term(), x0, L, f.mu(), 200);
  ApcgExplicitState s(Vector(x0.data(), x0.data() + 5));
  for (int k = 1; k <= 200; ++k) {
    apcg_step_sc(prob, s, std::sqrt(f.mu()), std::size_t{0});
    for (int j = 0; j < 5; ++j) ASSERT_NEAR(s.x[j], ref[k](j), 1e-10) << k;
  }
}

TEST(ApcgRelocation, ReachesOriginalMinimizer) {
  // F = f + 0.2 ||x||_1 + 0.5/2 ||x||^2 solved with the strong convexity moved into f
  auto f = random_diagonally_dominant_quadratic(6, 17);
  L1Regularizer base(0.2);
  const double mu_psi = 0.5;
  Vector x0(6, 0.0), s0(6, 0.0);
  RelocatedRegularizer<L1Regularizer> psi(base, mu_psi, f.partition(), x0, s0);
  RelocatedSmooth<QuadraticSmooth> ft(f, 0.0, mu_psi, x0, s0, 0.0);
  EXPECT_GT(ft.mu(), 0.0);
  CompositeProblem prob(ft, psi);
  SolveOptions o;
  o.variant = Variant::efficient;
  o.max_iters = 6000;
  const auto res = solve(prob, x0, o);
  Eigen::MatrixXd Qs = f.hessian() + mu_psi * Eigen::MatrixXd::Identity(6, 6);
  const auto xs = oracle::ista_lasso(Qs, f.linear_term(), 0.2, 20000);
  for (int j = 0; j < 6; ++j) EXPECT_NEAR(res.x[j], xs(j), 1e-8);
}

TEST(Solve, ZeroIterationsReturnsStart) {
  auto f = random_diagonally_dominant_quadratic(4, 2);
  L1Regularizer psi(0.1);
  CompositeProblem prob(f, psi);
  for (auto v : {Variant::general, Variant::strongly_convex, Variant::non_strongly_convex,
                 Variant::efficient}) {
    SolveOptions o;
    o.variant = v;
    const auto r = solve(prob, start_point(4), o);
    EXPECT_EQ(r.x, start_point(4));
    ASSERT_EQ(r.trace.size(), 1u);
    EXPECT_EQ(r.trace[0].iteration, 0u);
  }
}

TEST(Solve, DeterministicTraces) {
  auto f = random_diagonally_dominant_quadratic(10, 6);
  L1Regularizer psi(0.1);
  CompositeProblem prob(f, psi);
  for (auto v : {Variant::general, Variant::efficient}) {
    SolveOptions o;
    o.variant = v;
    o.max_iters = 300;
    o.seed = 99;
    const auto a = solve(prob, start_point(10), o);
    const auto b = solve(prob, start_point(10), o);
    ASSERT_EQ(a.trace.size(), 31u);
    for (std::size_t t = 0; t < a.trace.size(); ++t)
      EXPECT_EQ(a.trace[t].objective, b.trace[t].objective);
    EXPECT_EQ(a.x, b.x);
  }
}

TEST(Solve, ToleranceAndCallbackStop) {
  auto f = random_diagonally_dominant_quadratic(5, 8);
  ZeroRegularizer psi;
  CompositeProblem prob(f, psi);
  SolveOptions o;
  o.max_iters = 100000;
  o.tolerance = 1e-6;
  o.gap = [&](std::span<const double> x) {
    Vector g(5);
    f.gradient(x, g);
    return norm2(g);
  };
  const auto r = solve(prob, start_point(5), o);
  EXPECT_LT(r.iterations, 100000u);
  EXPECT_LE(r.trace.back().gap, 1e-6);

  SolveOptions c;
  c.max_iters = 1000;
  c.callback = [](std::size_t k, std::span<const double>) { return k >= 20; };
  EXPECT_EQ(solve(prob, start_point(5), c).iterations, 20u);

  SolveOptions bad;
  bad.tolerance = 1e-3;
  EXPECT_THROW(solve(prob, start_point(5), bad), config_error);
}

TEST(Solve, RejectsStartOutsideDomain) {
  auto f = random_diagonally_dominant_quadratic(3, 2);
  BoxIndicator psi(0.0, 1.0);
  CompositeProblem prob(f, psi);
  SolveOptions o;
  EXPECT_THROW(solve(prob, Vector{2.0, 0.0, 0.0}, o), input_error);
}
