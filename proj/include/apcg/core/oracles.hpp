#pragma once

#include <concepts>
#include <cstddef>
#include <limits>
#include <span>

#include "apcg/core/block_partition.hpp"
#include "apcg/core/errors.hpp"
#include "apcg/core/vector_ops.hpp"

namespace apcg {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Smooth part f of F = f + Psi.
///
/// `lipschitz()` holds one constant per block (Assumption: block-wise
/// Lipschitz partial gradients); `mu()` is the convexity parameter of f
/// measured in the norm weighted by those constants, so mu <= 1.
template <class F>
concept SmoothOracle = requires(const F& f, std::span<const double> x, std::span<double> out,
                                std::size_t i) {
  { f.partition() } -> std::convertible_to<const BlockPartition&>;
  { f.value(x) } -> std::convertible_to<double>;
  f.gradient(x, out);
  f.partial_gradient(x, i, out);
  { f.lipschitz() } -> std::convertible_to<std::span<const double>>;
  { f.mu() } -> std::convertible_to<double>;
};

/// Block-separable Psi(x) = sum_i Psi_i(x_i).
///
/// eval_block returns +infinity outside dom(Psi_i) and never NaN.
/// prox_block writes argmin_h { weight/2 ||h - center||^2 + Psi_i(h) }.
template <class R>
concept SeparableRegularizer = requires(const R& r, std::size_t i, std::span<const double> c,
                                        std::span<double> out, double w) {
  { r.eval_block(i, c) } -> std::convertible_to<double>;
  r.prox_block(i, c, w, out);
};

template <SeparableRegularizer R>
double eval_full(const R& psi, const BlockPartition& partition, std::span<const double> x) {
  partition.check_dimension(x.size(), "eval_full");
  double s = 0.0;
  for (std::size_t i = 0; i < partition.num_blocks(); ++i) {
    s += psi.eval_block(i, partition.block(x, i));
    if (s == infinity) return infinity;
  }
  return s;
}

/// Validated entry point to a block prox.
template <SeparableRegularizer R>
void block_prox(const R& psi, std::size_t i, std::span<const double> center, double weight,
                std::span<double> out) {
  if (!(weight > 0.0) || !std::isfinite(weight))
    throw input_error("block_prox: weight must be positive and finite");
  if (!all_finite(center)) throw input_error("block_prox: non-finite center");
  if (out.size() != center.size()) throw input_error("block_prox: output size mismatch");
  psi.prox_block(i, center, weight, out);
}

/// F = f + Psi over a shared block partition. Holds non-owning references;
/// both parts must outlive the problem.
template <SmoothOracle F, SeparableRegularizer R>
class CompositeProblem {
 public:
  using smooth_type = F;
  using regularizer_type = R;

  CompositeProblem(const F& f, const R& psi) : f_(&f), psi_(&psi) {}

  const F& smooth() const noexcept { return *f_; }
  const R& regularizer() const noexcept { return *psi_; }
  const BlockPartition& partition() const { return f_->partition(); }
  std::size_t num_blocks() const { return partition().num_blocks(); }
  std::size_t dimension() const { return partition().dimension(); }
  std::span<const double> lipschitz() const { return f_->lipschitz(); }
  double mu() const { return f_->mu(); }

  double objective(std::span<const double> x) const {
    const double p = eval_full(*psi_, partition(), x);
    if (p == infinity) return infinity;
    return f_->value(x) + p;
  }

 private:
  const F* f_;
  const R* psi_;
};

}  // namespace apcg
