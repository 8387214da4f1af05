#pragma once

#include <algorithm>
#include <span>

#include "apcg/core/oracles.hpp"
#include "apcg/core/vector_ops.hpp"

namespace apcg {

// Moving the strong convexity of Psi into f.
//
// Psi is given as base + mu_psi/2 ||.||^2 with `base` separable and convex.
// With a reference point x0 in dom(Psi) and s0 (a subgradient of Psi at x0):
//
//   f~(x)   = f(x) + Psi(x0) + <s0, x - x0> + mu_psi/2 ||x - x0||^2
//   Psi~(x) = Psi(x) - Psi(x0) - <s0, x - x0> - mu_psi/2 ||x - x0||^2
//
// f~ + Psi~ = f + Psi. f~ has block constants L_i + mu_psi and convexity
// parameter (mu_f + mu_psi) / max_i (L_i + mu_psi) in the induced norm.

template <SmoothOracle F>
class RelocatedSmooth {
 public:
  RelocatedSmooth(const F& f, double mu_f, double mu_psi, Vector x0, Vector s0,
                  double psi_at_x0)
      : f_(&f), mu_psi_(mu_psi), x0_(std::move(x0)), s0_(std::move(s0)), psi_x0_(psi_at_x0) {
    const auto& part = f.partition();
    part.check_dimension(x0_.size(), "RelocatedSmooth x0");
    part.check_dimension(s0_.size(), "RelocatedSmooth s0");
    if (!(mu_f >= 0.0) || !(mu_psi > 0.0))
      throw input_error("RelocatedSmooth: need mu_f >= 0 and mu_psi > 0");
    lipschitz_.assign(f.lipschitz().begin(), f.lipschitz().end());
    double lmax = 0.0;
    for (double& l : lipschitz_) {
      l += mu_psi;
      lmax = std::max(lmax, l);
    }
    mu_ = std::min(1.0, (mu_f + mu_psi) / lmax);
  }

  const BlockPartition& partition() const { return f_->partition(); }
  std::span<const double> lipschitz() const noexcept { return lipschitz_; }
  double mu() const noexcept { return mu_; }

  double value(std::span<const double> x) const {
    double lin = 0.0, quad = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double d = x[j] - x0_[j];
      lin += s0_[j] * d;
      quad += d * d;
    }
    return f_->value(x) + psi_x0_ + lin + 0.5 * mu_psi_ * quad;
  }

  void gradient(std::span<const double> x, std::span<double> out) const {
    f_->gradient(x, out);
    for (std::size_t j = 0; j < x.size(); ++j) out[j] += s0_[j] + mu_psi_ * (x[j] - x0_[j]);
  }

  void partial_gradient(std::span<const double> x, std::size_t i, std::span<double> out) const {
    f_->partial_gradient(x, i, out);
    const std::size_t off = partition().offset(i);
    for (std::size_t j = 0; j < out.size(); ++j)
      out[j] += s0_[off + j] + mu_psi_ * (x[off + j] - x0_[off + j]);
  }

 private:
  const F* f_;
  double mu_psi_;
  Vector x0_, s0_;
  double psi_x0_;
  Vector lipschitz_;
  double mu_ = 0.0;
};

template <SeparableRegularizer R>
class RelocatedRegularizer {
 public:
  RelocatedRegularizer(const R& base, double mu_psi, BlockPartition partition, Vector x0,
                       Vector s0)
      : base_(&base),
        mu_psi_(mu_psi),
        partition_(std::move(partition)),
        x0_(std::move(x0)),
        s0_(std::move(s0)) {
    partition_.check_dimension(x0_.size(), "RelocatedRegularizer x0");
    partition_.check_dimension(s0_.size(), "RelocatedRegularizer s0");
  }

  /// Psi_i(x_i) = base_i(x_i) + mu_psi/2 ||x_i||^2, the original block term.
  double original_block(std::size_t i, std::span<const double> x) const {
    const double b = base_->eval_block(i, x);
    if (b == infinity) return infinity;
    return b + 0.5 * mu_psi_ * squared_norm(x);
  }

  double eval_block(std::size_t i, std::span<const double> x) const {
    const double b = base_->eval_block(i, x);
    if (b == infinity) return infinity;
    const auto x0 = partition_.block(std::span<const double>(x0_), i);
    const auto s0 = partition_.block(std::span<const double>(s0_), i);
    double lin = 0.0, quad = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double d = x[j] - x0[j];
      lin += s0[j] * d;
      quad += d * d;
    }
    return b + 0.5 * mu_psi_ * squared_norm(x) - original_block(i, x0) - lin -
           0.5 * mu_psi_ * quad;
  }

  // The quadratic terms cancel up to <mu_psi x0 - s0, h>, so the prox is the
  // base prox at a shifted center.
  void prox_block(std::size_t i, std::span<const double> center, double weight,
                  std::span<double> out) const {
    const std::size_t off = partition_.offset(i);
    for (std::size_t j = 0; j < center.size(); ++j)
      out[j] = center[j] - (mu_psi_ * x0_[off + j] - s0_[off + j]) / weight;
    base_->prox_block(i, std::span<const double>(out.data(), out.size()), weight, out);
  }

 private:
  const R* base_;
  double mu_psi_;
  BlockPartition partition_;
  Vector x0_, s0_;
};

}  // namespace apcg
