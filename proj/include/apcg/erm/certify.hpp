#pragma once

#include <cmath>
#include <span>

#include "apcg/core/errors.hpp"
#include "apcg/erm/problem.hpp"

namespace apcg {

/// One proximal full-gradient step on the simple splitting with step
/// constant ||A||^2 / (lambda n^2). Separable, so it is n scalar proxes.
template <ErmLoss Loss>
Vector full_prox_step(const ErmProblem<Loss>& p, std::span<const double> x) {
  if (x.size() != p.n()) throw input_error("full_prox_step: dimension mismatch");
  const double n = static_cast<double>(p.n());
  const double nrm = p.spectral_norm();
  if (!(nrm > 0.0)) throw input_error("full_prox_step: A must be nonzero");
  const double Lf = nrm * nrm / (p.lambda() * n * n);
  Vector Ax(p.d());
  p.A().multiply(x, Ax);
  Vector t(p.n());
  for (std::size_t i = 0; i < p.n(); ++i) {
    const double g = p.A().col_dot(i, Ax) / (p.lambda() * n * n);
    const double center = x[i] - g / Lf;
    // argmin Lf/2 (s - center)^2 + 1/n phi^*(-s), scaled by n
    t[i] = p.loss().minimize_conj_quadratic(i, n * Lf, -n * Lf * center);
  }
  return t;
}

/// Upper bound on P(w(T(x))) - D(T(x)): 4 ||A||^2 / (lambda gamma n) * (D* - D(x)).
template <ErmLoss Loss>
double full_prox_gap_bound(const ErmProblem<Loss>& p, double dual_opt, double dual_x) {
  const double nrm = p.spectral_norm();
  return 4.0 * nrm * nrm / (p.lambda() * p.gamma() * static_cast<double>(p.n())) *
         (dual_opt - dual_x);
}

/// (lambda eta n + ||A||^2) / (lambda gamma n) * (D* - D(x)), valid when
/// every phi_i is also 1/eta-strongly convex.
template <ErmLoss Loss>
double gap_by_dual_bound(const ErmProblem<Loss>& p, double dual_opt, std::span<const double> x) {
  if constexpr (!Loss::strongly_convex) {
    throw config_error("gap_by_dual_bound: loss is not strongly convex");
  } else {
    const double n = static_cast<double>(p.n());
    const double nrm = p.spectral_norm();
    const double coef =
        (p.lambda() * p.loss().eta() * n + nrm * nrm) / (p.lambda() * p.gamma() * n);
    return coef * (dual_opt - dual_objective(p, x));
  }
}

/// ceil((n + sqrt(n R^2 / (lambda gamma))) log(C / epsilon)); 0 once epsilon >= C.
inline std::size_t complexity_estimate(std::size_t n, double R, double lambda, double gamma,
                                       double epsilon, double C) {
  if (!(lambda > 0.0 && gamma > 0.0 && epsilon > 0.0 && C > 0.0 && R >= 0.0))
    throw input_error("complexity_estimate: arguments must be positive");
  if (epsilon >= C) return 0;
  const double nd = static_cast<double>(n);
  return static_cast<std::size_t>(
      std::ceil((nd + std::sqrt(nd * R * R / (lambda * gamma))) * std::log(C / epsilon)));
}

}  // namespace apcg
