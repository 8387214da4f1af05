#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>

#include <Eigen/Dense>

#include "apcg/core/block_partition.hpp"
#include "apcg/core/errors.hpp"
#include "apcg/core/vector_ops.hpp"

namespace apcg {

/// f(x) = 1/2 x'Qx - b'x with Q symmetric positive semidefinite.
///
/// L_i is the largest eigenvalue of the diagonal block Q_ii; mu is the
/// smallest eigenvalue of D^{-1/2} Q D^{-1/2} with D = blkdiag(L_i I).
class QuadraticSmooth {
 public:
  QuadraticSmooth(Eigen::MatrixXd Q, Eigen::VectorXd b, BlockPartition partition)
      : Q_(std::move(Q)), b_(std::move(b)), partition_(std::move(partition)) {
    const auto N = static_cast<Eigen::Index>(partition_.dimension());
    if (Q_.rows() != N || Q_.cols() != N || b_.size() != N)
      throw input_error("QuadraticSmooth: dimensions do not match partition");
    if (!Q_.isApprox(Q_.transpose())) throw input_error("QuadraticSmooth: Q must be symmetric");

    lipschitz_.resize(partition_.num_blocks());
    Eigen::VectorXd dscale(N);
    for (std::size_t i = 0; i < partition_.num_blocks(); ++i) {
      const auto off = static_cast<Eigen::Index>(partition_.offset(i));
      const auto sz = static_cast<Eigen::Index>(partition_.size(i));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q_.block(off, off, sz, sz),
                                                        Eigen::EigenvaluesOnly);
      lipschitz_[i] = es.eigenvalues().maxCoeff();
      if (!(lipschitz_[i] > 0.0))
        throw input_error("QuadraticSmooth: every diagonal block must be positive definite");
      dscale.segment(off, sz).setConstant(1.0 / std::sqrt(lipschitz_[i]));
    }
    const Eigen::MatrixXd scaled = dscale.asDiagonal() * Q_ * dscale.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled, Eigen::EigenvaluesOnly);
    mu_ = std::clamp(es.eigenvalues().minCoeff(), 0.0, 1.0);
  }

  const BlockPartition& partition() const noexcept { return partition_; }
  std::span<const double> lipschitz() const noexcept { return lipschitz_; }
  double mu() const noexcept { return mu_; }

  double value(std::span<const double> x) const {
    const auto xv = map(x);
    return 0.5 * xv.dot(Q_ * xv) - b_.dot(xv);
  }

  void gradient(std::span<const double> x, std::span<double> out) const {
    Eigen::Map<Eigen::VectorXd> o(out.data(), static_cast<Eigen::Index>(out.size()));
    o.noalias() = Q_ * map(x) - b_;
  }

  void partial_gradient(std::span<const double> x, std::size_t i, std::span<double> out) const {
    const auto off = static_cast<Eigen::Index>(partition_.offset(i));
    const auto sz = static_cast<Eigen::Index>(partition_.size(i));
    Eigen::Map<Eigen::VectorXd> o(out.data(), sz);
    o.noalias() = Q_.middleRows(off, sz) * map(x) - b_.segment(off, sz);
  }

  const Eigen::MatrixXd& hessian() const noexcept { return Q_; }
  const Eigen::VectorXd& linear_term() const noexcept { return b_; }

 private:
  static Eigen::Map<const Eigen::VectorXd> map(std::span<const double> x) {
    return {x.data(), static_cast<Eigen::Index>(x.size())};
  }

  Eigen::MatrixXd Q_;
  Eigen::VectorXd b_;
  BlockPartition partition_;
  Vector lipschitz_;
  double mu_ = 0.0;
};

/// Random symmetric, strictly diagonally dominant (hence SPD) Hessian with a
/// Gaussian linear term. `coupling` in (0, 1) sets the off-diagonal mass
/// relative to the diagonal: values near 1 give ill-conditioned instances.
inline QuadraticSmooth random_diagonally_dominant_quadratic(std::size_t N, std::uint64_t seed,
                                                            double coupling = 0.5,
                                                            BlockPartition partition = {}) {
  if (partition.num_blocks() == 0) partition = BlockPartition::scalar(N);
  if (!(coupling > 0.0 && coupling < 1.0))
    throw input_error("random_diagonally_dominant_quadratic: coupling must be in (0,1)");
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> off(-1.0, 1.0);
  std::uniform_real_distribution<double> diag(1.0, 1.5);
  std::normal_distribution<double> normal;
  const auto n = static_cast<Eigen::Index>(N);
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) Q(i, j) = Q(j, i) = off(gen);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double rowsum = Q.row(i).cwiseAbs().sum();
    Q(i, i) = rowsum / coupling * diag(gen) + 1e-3;
  }
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) b(i) = normal(gen);
  return QuadraticSmooth(std::move(Q), std::move(b), std::move(partition));
}

}  // namespace apcg
