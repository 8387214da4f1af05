#pragma once

#include "apcg/core/rng.hpp"
#include "apcg/erm/problem.hpp"

namespace apcg {

/// Stochastic dual coordinate ascent with exact coordinate maximization.
/// w = A x / (lambda n) is maintained incrementally.
struct SdcaState {
  Vector x;
  Vector w;
};

template <ErmLoss Loss>
SdcaState make_sdca_state(const ErmProblem<Loss>& p) {
  return {Vector(p.n(), 0.0), Vector(p.d(), 0.0)};
}

/// Maximizes D along coordinate i: with a = ||A_i||^2 / (lambda n),
/// x_i <- argmin_s a/2 s^2 + (A_i' w - a x_i) s + phi_i^*(-s).
template <ErmLoss Loss>
void sdca_step(const ErmProblem<Loss>& p, SdcaState& s, std::size_t i) {
  const double ln = p.lambda() * static_cast<double>(p.n());
  const double a = p.col_sq_norm(i) / ln;
  const double b = p.A().col_dot(i, s.w) - a * s.x[i];
  const double xi = p.loss().minimize_conj_quadratic(i, a, b);
  const double delta = xi - s.x[i];
  if (delta != 0.0) {
    s.x[i] = xi;
    p.A().axpy_col(i, delta / ln, s.w);
  }
}

template <ErmLoss Loss>
void sdca_epoch(const ErmProblem<Loss>& p, SdcaState& s, BlockSampler& rng) {
  for (std::size_t t = 0; t < p.n(); ++t) sdca_step(p, s, rng(p.n()));
}

}  // namespace apcg
