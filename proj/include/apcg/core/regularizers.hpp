#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "apcg/core/errors.hpp"
#include "apcg/core/oracles.hpp"

namespace apcg {

struct ZeroRegularizer {
  double eval_block(std::size_t, std::span<const double>) const { return 0.0; }
  void prox_block(std::size_t, std::span<const double> center, double,
                  std::span<double> out) const {
    std::copy(center.begin(), center.end(), out.begin());
  }
};

/// scale * ||x||_1, prox is soft thresholding at scale/weight.
class L1Regularizer {
 public:
  explicit L1Regularizer(double scale) : scale_(scale) {
    if (!(scale >= 0.0)) throw input_error("L1Regularizer: scale must be >= 0");
  }
  double eval_block(std::size_t, std::span<const double> x) const {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return scale_ * s;
  }
  void prox_block(std::size_t, std::span<const double> center, double weight,
                  std::span<double> out) const {
    const double t = scale_ / weight;
    for (std::size_t j = 0; j < center.size(); ++j) {
      const double c = center[j];
      out[j] = c > t ? c - t : (c < -t ? c + t : 0.0);
    }
  }
  double scale() const noexcept { return scale_; }

 private:
  double scale_;
};

/// scale * sum_i ||x_i||_2, the block (group) soft-thresholding prox.
class GroupL2Regularizer {
 public:
  explicit GroupL2Regularizer(double scale) : scale_(scale) {
    if (!(scale >= 0.0)) throw input_error("GroupL2Regularizer: scale must be >= 0");
  }
  double eval_block(std::size_t, std::span<const double> x) const {
    return scale_ * norm2(x);
  }
  void prox_block(std::size_t, std::span<const double> center, double weight,
                  std::span<double> out) const {
    const double nc = norm2(center);
    const double t = scale_ / weight;
    const double shrink = nc > t ? 1.0 - t / nc : 0.0;
    for (std::size_t j = 0; j < center.size(); ++j) out[j] = shrink * center[j];
  }

 private:
  double scale_;
};

/// Indicator of the box [lo, hi]^N; prox is projection.
class BoxIndicator {
 public:
  BoxIndicator(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo <= hi)) throw input_error("BoxIndicator: empty interval");
  }
  double eval_block(std::size_t, std::span<const double> x) const {
    for (double v : x)
      if (!(v >= lo_ && v <= hi_)) return infinity;
    return 0.0;
  }
  void prox_block(std::size_t, std::span<const double> center, double,
                  std::span<double> out) const {
    for (std::size_t j = 0; j < center.size(); ++j) out[j] = std::clamp(center[j], lo_, hi_);
  }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_, hi_;
};

}  // namespace apcg
