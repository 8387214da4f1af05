#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "apcg/core/errors.hpp"
#include "apcg/core/oracles.hpp"
#include "apcg/core/vector_ops.hpp"
#include "apcg/data/sparse.hpp"
#include "apcg/data/stats.hpp"
#include "apcg/erm/losses.hpp"

namespace apcg {

/// Regularized ERM with linear predictors and g = 1/2 ||.||^2:
///   P(w) = 1/n sum_i phi_i(A_i' w) + lambda/2 ||w||^2
///   D(x) = 1/n sum_i -phi_i^*(-x_i) - 1/(2 lambda n^2) ||A x||^2
/// A is d x n with labels already folded into the columns.
template <ErmLoss Loss>
class ErmProblem {
 public:
  using loss_type = Loss;

  ErmProblem(std::shared_ptr<const SparseColMatrix> A, Loss loss, double lambda)
      : A_(std::move(A)), loss_(std::move(loss)), lambda_(lambda) {
    if (!A_) throw input_error("ErmProblem: null matrix");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
      throw input_error("ErmProblem: lambda must be positive");
    if (A_->cols() == 0) throw input_error("ErmProblem: no examples");
    col_sq_.resize(A_->cols());
    for (std::size_t i = 0; i < A_->cols(); ++i) {
      col_sq_[i] = A_->col_sq_norm(i);
      R_ = std::max(R_, std::sqrt(col_sq_[i]));
    }
  }

  ErmProblem(SparseColMatrix A, Loss loss, double lambda)
      : ErmProblem(std::make_shared<const SparseColMatrix>(std::move(A)), std::move(loss), lambda) {}

  ErmProblem(const ErmProblem& o)
      : A_(o.A_), loss_(o.loss_), lambda_(o.lambda_), col_sq_(o.col_sq_), R_(o.R_) {}

  const SparseColMatrix& A() const noexcept { return *A_; }
  std::shared_ptr<const SparseColMatrix> shared_matrix() const noexcept { return A_; }
  const Loss& loss() const noexcept { return loss_; }
  double lambda() const noexcept { return lambda_; }
  double gamma() const noexcept { return loss_.gamma(); }
  std::size_t n() const noexcept { return A_->cols(); }
  std::size_t d() const noexcept { return A_->rows(); }
  double R() const noexcept { return R_; }
  double col_sq_norm(std::size_t i) const { return col_sq_[i]; }
  std::span<const double> col_sq_norms() const noexcept { return col_sq_; }

  /// ||A||_2, computed once on first use.
  double spectral_norm() const {
    std::call_once(*spectral_once_, [&] { spectral_ = apcg::spectral_norm(*A_, 1e-14); });
    return spectral_;
  }

 private:
  std::shared_ptr<const SparseColMatrix> A_;
  Loss loss_;
  double lambda_;
  Vector col_sq_;
  double R_ = 0.0;
  mutable std::unique_ptr<std::once_flag> spectral_once_ = std::make_unique<std::once_flag>();
  mutable double spectral_ = 0.0;
};

struct ErmConstants {
  Vector lipschitz;  // L_i = ||A_i||^2/(lambda n^2) + gamma/n
  double mu = 0.0;   // (gamma/n) / max_i L_i
};

template <ErmLoss Loss>
ErmConstants erm_constants(const ErmProblem<Loss>& p) {
  const double n = static_cast<double>(p.n());
  ErmConstants c;
  c.lipschitz.resize(p.n());
  double lmax = 0.0;
  for (std::size_t i = 0; i < p.n(); ++i) {
    c.lipschitz[i] = p.col_sq_norm(i) / (p.lambda() * n * n) + p.gamma() / n;
    lmax = std::max(lmax, c.lipschitz[i]);
  }
  c.mu = std::min(1.0, (p.gamma() / n) / lmax);
  return c;
}

/// w = A x / (lambda n)
template <ErmLoss Loss>
Vector primal_from_dual(const ErmProblem<Loss>& p, std::span<const double> x) {
  if (x.size() != p.n()) throw input_error("primal_from_dual: dimension mismatch");
  Vector w(p.d());
  p.A().multiply(x, w);
  const double s = 1.0 / (p.lambda() * static_cast<double>(p.n()));
  for (double& v : w) v *= s;
  return w;
}

template <ErmLoss Loss>
double primal_objective(const ErmProblem<Loss>& p, std::span<const double> w) {
  if (w.size() != p.d()) throw input_error("primal_objective: dimension mismatch");
  double loss = 0.0;
  for (std::size_t i = 0; i < p.n(); ++i) loss += p.loss().value(i, p.A().col_dot(i, w));
  return loss / static_cast<double>(p.n()) + 0.5 * p.lambda() * squared_norm(w);
}

/// D(x); -infinity when some x_i is outside the conjugate domain.
template <ErmLoss Loss>
double dual_objective(const ErmProblem<Loss>& p, std::span<const double> x) {
  if (x.size() != p.n()) throw input_error("dual_objective: dimension mismatch");
  const double n = static_cast<double>(p.n());
  double s = 0.0;
  for (std::size_t i = 0; i < p.n(); ++i) {
    const double c = p.loss().conj(i, -x[i]);
    if (c == infinity) return -infinity;
    s -= c;
  }
  Vector Ax(p.d());
  p.A().multiply(x, Ax);
  return s / n - squared_norm(Ax) / (2.0 * p.lambda() * n * n);
}

struct DualSubgradient {
  Vector a;  // a_i in d phi_i^*(-x_i)
  Vector w;  // omega(x)
  double norm_sq = 0.0;
};

/// The subgradient of D built from omega(x) and one a_i per example;
/// norm_sq = 1/n^2 sum_i (A_i' w - a_i)^2.
template <ErmLoss Loss>
DualSubgradient dual_subgradient(const ErmProblem<Loss>& p, std::span<const double> x) {
  DualSubgradient g;
  g.w = primal_from_dual(p, x);
  g.a.resize(p.n());
  const double n = static_cast<double>(p.n());
  for (std::size_t i = 0; i < p.n(); ++i) {
    const double m = p.A().col_dot(i, g.w);
    g.a[i] = p.loss().conj_neg_subgradient(i, x[i], m);
    const double r = m - g.a[i];
    g.norm_sq += r * r;
  }
  g.norm_sq /= n * n;
  return g;
}

struct PrimalDualReport {
  double epoch = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double dual_subgrad_norm_sq = 0.0;
  double subgrad_gap_bound = 0.0;  // n/(2 gamma) * dual_subgrad_norm_sq
};

template <ErmLoss Loss>
PrimalDualReport primal_dual_report(const ErmProblem<Loss>& p, std::span<const double> x,
                                    double epoch) {
  PrimalDualReport r;
  r.epoch = epoch;
  const auto g = dual_subgradient(p, x);
  r.primal = primal_objective(p, g.w);
  r.dual = dual_objective(p, x);
  r.gap = r.primal - r.dual;
  r.dual_subgrad_norm_sq = g.norm_sq;
  r.subgrad_gap_bound = static_cast<double>(p.n()) / (2.0 * p.gamma()) * g.norm_sq;
  return r;
}

}  // namespace apcg
