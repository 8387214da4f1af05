#pragma once

#include <algorithm>
#include <span>

#include "apcg/core/block_partition.hpp"
#include "apcg/core/oracles.hpp"
#include "apcg/erm/problem.hpp"

namespace apcg {

// The dual as a composite problem F = -D = f + Psi over scalar blocks.
//
// Splitting::simple      f = 1/(2 lambda n^2) ||Ax||^2,       Psi_i = 1/n phi^*(-x_i)
// Splitting::relocated   f = simple f + gamma/(2n) ||x||^2,   Psi_i = 1/n phi^*(-x_i) - gamma/(2n) x_i^2
//
// The relocated form has strongly convex f, which the accelerated linear
// rate needs; the simple form is what the full proximal step uses.
enum class Splitting { simple, relocated };

template <ErmLoss Loss>
class ErmDualSmooth {
 public:
  ErmDualSmooth(const ErmProblem<Loss>& p, Splitting s)
      : p_(&p), split_(s), partition_(BlockPartition::scalar(p.n())), Ax_(p.d()) {
    const double n = static_cast<double>(p.n());
    lipschitz_.resize(p.n());
    if (s == Splitting::relocated) {
      const auto c = erm_constants(p);
      lipschitz_ = c.lipschitz;
      mu_ = c.mu;
    } else {
      for (std::size_t i = 0; i < p.n(); ++i)
        lipschitz_[i] = p.col_sq_norm(i) / (p.lambda() * n * n);
    }
  }

  const BlockPartition& partition() const noexcept { return partition_; }
  std::span<const double> lipschitz() const noexcept { return lipschitz_; }
  double mu() const noexcept { return mu_; }
  Splitting splitting() const noexcept { return split_; }

  double value(std::span<const double> x) const {
    const double n = static_cast<double>(p_->n());
    p_->A().multiply(x, Ax_);
    double v = squared_norm(Ax_) / (2.0 * p_->lambda() * n * n);
    if (split_ == Splitting::relocated) v += p_->gamma() / (2.0 * n) * squared_norm(x);
    return v;
  }

  void gradient(std::span<const double> x, std::span<double> out) const {
    const double n = static_cast<double>(p_->n());
    p_->A().multiply(x, Ax_);
    p_->A().multiply_transpose(Ax_, out);
    const double s = 1.0 / (p_->lambda() * n * n);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] *= s;
      if (split_ == Splitting::relocated) out[i] += p_->gamma() / n * x[i];
    }
  }

  // O(nnz(A)): this oracle exists for cross-checking the specialized solver.
  void partial_gradient(std::span<const double> x, std::size_t i, std::span<double> out) const {
    const double n = static_cast<double>(p_->n());
    p_->A().multiply(x, Ax_);
    out[0] = p_->A().col_dot(i, Ax_) / (p_->lambda() * n * n);
    if (split_ == Splitting::relocated) out[0] += p_->gamma() / n * x[i];
  }

 private:
  const ErmProblem<Loss>* p_;
  Splitting split_;
  BlockPartition partition_;
  Vector lipschitz_;
  double mu_ = 0.0;
  mutable Vector Ax_;  // scratch; not thread safe
};

template <ErmLoss Loss>
class ErmDualRegularizer {
 public:
  ErmDualRegularizer(const ErmProblem<Loss>& p, Splitting s) : p_(&p), split_(s) {}

  double eval_block(std::size_t i, std::span<const double> x) const {
    const double n = static_cast<double>(p_->n());
    const double c = p_->loss().conj(i, -x[0]);
    if (c == infinity) return infinity;
    double v = c / n;
    if (split_ == Splitting::relocated) v -= p_->gamma() / (2.0 * n) * x[0] * x[0];
    return v;
  }

  // argmin_s weight/2 (s - c)^2 + Psi_i(s); scaled by n this is
  // (n weight - shift)/2 s^2 - n weight c s + phi^*(-s)
  void prox_block(std::size_t i, std::span<const double> center, double weight,
                  std::span<double> out) const {
    const double n = static_cast<double>(p_->n());
    const double shift = split_ == Splitting::relocated ? p_->gamma() : 0.0;
    out[0] = p_->loss().minimize_conj_quadratic(i, n * weight - shift, -n * weight * center[0]);
  }

 private:
  const ErmProblem<Loss>* p_;
  Splitting split_;
};

/// Bundles the two parts of one splitting with a CompositeProblem view.
template <ErmLoss Loss>
struct ErmComposite {
  ErmDualSmooth<Loss> f;
  ErmDualRegularizer<Loss> psi;

  ErmComposite(const ErmProblem<Loss>& p, Splitting s) : f(p, s), psi(p, s) {}
  ErmComposite(const ErmComposite&) = delete;

  CompositeProblem<ErmDualSmooth<Loss>, ErmDualRegularizer<Loss>> problem() const {
    return {f, psi};
  }
};

}  // namespace apcg
