#pragma once

#include <cmath>
#include <span>

#include "apcg/core/errors.hpp"
#include "apcg/core/rng.hpp"
#include "apcg/core/vector_ops.hpp"
#include "apcg/erm/problem.hpp"

namespace apcg {

/// State of the specialized dual solver, in the stabilized variables.
///
/// u_bar = scale * u_tilde and p_bar = scale * p_tilde share one scalar, and
/// p_bar = A u_bar, q = A v are kept in sync with one sparse column per step.
/// The dual iterate is x = u_bar / rho + v and the primal one is
/// w = (p_bar / rho + q) / (lambda n).
struct ErmDualState {
  Vector u_tilde, v;  // length n
  Vector p_tilde, q;  // length d
  double scale = 1.0;
  double alpha = 0.0;
  double rho = 0.0;
  std::size_t k = 0;

  static constexpr double renormalize_below = 1e-100;

  double u_bar(std::size_t i) const { return scale * u_tilde[i]; }
  double p_bar(std::size_t j) const { return scale * p_tilde[j]; }

  void renormalize() {
    for (double& u : u_tilde) u *= scale;
    for (double& p : p_tilde) p *= scale;
    scale = 1.0;
  }

  void x(std::span<double> out) const {
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = u_bar(i) / rho + v[i];
  }
  Vector x() const {
    Vector out(v.size());
    x(out);
    return out;
  }
};

/// Starts from x0 (default 0), which must lie in the dual domain.
template <ErmLoss Loss>
ErmDualState make_erm_state(const ErmProblem<Loss>& p, std::span<const double> x0 = {}) {
  ErmDualState s;
  const auto c = erm_constants(p);
  s.alpha = std::sqrt(c.mu) / static_cast<double>(p.n());
  s.rho = (1.0 - s.alpha) / (1.0 + s.alpha);
  s.u_tilde.assign(p.n(), 0.0);
  s.p_tilde.assign(p.d(), 0.0);
  s.q.assign(p.d(), 0.0);
  if (x0.empty()) {
    s.v.assign(p.n(), 0.0);
  } else {
    if (x0.size() != p.n()) throw input_error("make_erm_state: dimension mismatch");
    for (std::size_t i = 0; i < p.n(); ++i)
      if (!p.loss().in_dual_domain(i, x0[i]))
        throw input_error("make_erm_state: x0 outside the dual domain");
    s.v.assign(x0.begin(), x0.end());
    p.A().multiply(s.v, s.q);
  }
  return s;
}

/// One step on coordinate i. Cost is O(nnz(A_i)) plus an O(n + d) fold of the
/// shared scale roughly every log(1e-100)/log(rho) steps.
template <ErmLoss Loss>
void apcg_erm_step(const ErmProblem<Loss>& p, ErmDualState& s, std::size_t i) {
  const double n = static_cast<double>(p.n());
  const double ln = p.lambda() * n;
  const double na = n * s.alpha;
  const double ub = s.u_bar(i);

  const double Ay_i = s.scale * p.A().col_dot(i, s.p_tilde) + p.A().col_dot(i, s.q);
  const double grad = Ay_i / (ln * n) + p.gamma() / n * (ub + s.v[i]);
  const double c = s.alpha * (p.col_sq_norm(i) + p.lambda() * p.gamma() * n) / ln;
  const double t0 = -ub + s.v[i];
  // h = argmin c/2 h^2 + grad h + Psi_i(t0 + h), Psi_i = 1/n phi^*(-s) - gamma/(2n) s^2
  const double snew = p.loss().minimize_conj_quadratic(i, n * c - p.gamma(), -n * c * t0 + n * grad);
  const double h = snew - t0;
  if (h != 0.0) {
    const double du = -(1.0 - na) / 2.0 * h / s.scale;
    const double dv = (1.0 + na) / 2.0 * h;
    s.u_tilde[i] += du;
    p.A().axpy_col(i, du, s.p_tilde);
    s.v[i] += dv;
    p.A().axpy_col(i, dv, s.q);
  }
  s.scale *= s.rho;
  if (s.scale < ErmDualState::renormalize_below) s.renormalize();
  ++s.k;
}

template <ErmLoss Loss>
void apcg_erm_step(const ErmProblem<Loss>& p, ErmDualState& s, BlockSampler& rng) {
  apcg_erm_step(p, s, rng(p.n()));
}

/// x^(k) projected onto the dual domain. x^(k) is a convex combination of
/// feasible points, so the projection only removes rounding.
template <ErmLoss Loss>
Vector erm_dual_iterate(const ErmProblem<Loss>& p, const ErmDualState& s) {
  Vector x = s.x();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = p.loss().project_dual(i, x[i]);
  return x;
}

/// w = (p_bar / rho + q) / (lambda n), read from the aggregates.
template <ErmLoss Loss>
Vector erm_primal(const ErmProblem<Loss>& p, const ErmDualState& s) {
  Vector w(p.d());
  const double ln = p.lambda() * static_cast<double>(p.n());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = (s.p_bar(j) / s.rho + s.q[j]) / ln;
  return w;
}

/// Largest relative deviation of the aggregates from A u_bar and A v,
/// each measured against max(1, ||recomputed||_inf).
template <ErmLoss Loss>
double aggregate_drift(const ErmProblem<Loss>& p, const ErmDualState& s) {
  Vector ub(p.n()), Au(p.d()), Av(p.d());
  for (std::size_t i = 0; i < p.n(); ++i) ub[i] = s.u_bar(i);
  p.A().multiply(ub, Au);
  p.A().multiply(s.v, Av);
  double eu = 0.0, ev = 0.0, su = 1.0, sv = 1.0;
  for (std::size_t j = 0; j < p.d(); ++j) {
    eu = std::max(eu, std::abs(s.p_bar(j) - Au[j]));
    ev = std::max(ev, std::abs(s.q[j] - Av[j]));
    su = std::max(su, std::abs(Au[j]));
    sv = std::max(sv, std::abs(Av[j]));
  }
  return std::max(eu / su, ev / sv);
}

/// Throws invariant_error when the aggregates have drifted beyond tol.
template <ErmLoss Loss>
void check_aggregates(const ErmProblem<Loss>& p, const ErmDualState& s, double tol = 1e-8) {
  if (aggregate_drift(p, s) > tol) throw invariant_error("ErmDualState: aggregates out of sync");
}

}  // namespace apcg
