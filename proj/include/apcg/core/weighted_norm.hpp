#pragma once

#include <cmath>
#include <span>

#include "apcg/core/block_partition.hpp"
#include "apcg/core/errors.hpp"
#include "apcg/core/vector_ops.hpp"

namespace apcg {

/// (sum_i L_i ||x_i||_2^2)^{1/2}, the norm in which the block Lipschitz
/// constants are all one.
inline double weighted_norm(std::span<const double> x, std::span<const double> weights,
                            const BlockPartition& partition) {
  partition.check_dimension(x.size(), "weighted_norm");
  if (weights.size() != partition.num_blocks())
    throw input_error("weighted_norm: one weight per block required");
  double s = 0.0;
  for (std::size_t i = 0; i < partition.num_blocks(); ++i) {
    if (!(weights[i] > 0.0)) throw input_error("weighted_norm: weights must be positive");
    s += weights[i] * squared_norm(partition.block(x, i));
  }
  return std::sqrt(s);
}

/// ||x - y||_L; used for R_0 = ||x0 - x*||_L.
inline double weighted_distance(std::span<const double> x, std::span<const double> y,
                                std::span<const double> weights,
                                const BlockPartition& partition) {
  if (x.size() != y.size()) throw input_error("weighted_distance: dimension mismatch");
  Vector d(x.begin(), x.end());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= y[i];
  return weighted_norm(d, weights, partition);
}

/// Thin wrapper holding the weights, for callers that evaluate many norms.
class WeightedNorm {
 public:
  WeightedNorm(Vector weights, BlockPartition partition)
      : weights_(std::move(weights)), partition_(std::move(partition)) {
    if (weights_.size() != partition_.num_blocks())
      throw input_error("WeightedNorm: one weight per block required");
  }
  double operator()(std::span<const double> x) const {
    return weighted_norm(x, weights_, partition_);
  }
  double distance(std::span<const double> x, std::span<const double> y) const {
    return weighted_distance(x, y, weights_, partition_);
  }
  const Vector& weights() const noexcept { return weights_; }

 private:
  Vector weights_;
  BlockPartition partition_;
};

}  // namespace apcg
