#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "apcg/core/errors.hpp"
#include "apcg/core/oracles.hpp"
#include "apcg/core/rng.hpp"
#include "apcg/core/vector_ops.hpp"

namespace apcg {

/// Change-of-variables state for the strongly convex method.
///
/// With rho = (1 - alpha) / (1 + alpha), the iterates are
///   x^(k) = u_bar / rho + v,  y^(k) = u_bar + v,  z^(k) = -u_bar / rho + v
/// where u_bar = rho^(k+1) u^(k). u_bar is stored as scale * u_tilde so that
/// the per-step contraction by rho is a scalar update; u_tilde is folded
/// back when scale gets small.
struct ApcgEfficientState {
  Vector u_tilde;
  double scale = 1.0;
  Vector v;
  double alpha = 0.0;
  double rho = 0.0;
  std::size_t k = 0;
  Vector y;     // scratch: materialized y^(k) for the gradient oracle
  Vector grad;  // scratch, one block
  Vector blk;   // scratch, one block

  static constexpr double renormalize_below = 1e-100;

  ApcgEfficientState() = default;
  ApcgEfficientState(std::span<const double> x0, double alpha_)
      : u_tilde(x0.size(), 0.0), v(x0.begin(), x0.end()), alpha(alpha_) {
    if (!(alpha_ > 0.0 && alpha_ < 1.0)) throw input_error("ApcgEfficientState: alpha in (0, 1)");
    rho = (1.0 - alpha) / (1.0 + alpha);
  }

  double u_bar(std::size_t j) const { return scale * u_tilde[j]; }

  void renormalize() {
    for (double& u : u_tilde) u *= scale;
    scale = 1.0;
  }

  void x(std::span<double> out) const {
    for (std::size_t j = 0; j < v.size(); ++j) out[j] = u_bar(j) / rho + v[j];
  }
  void y_point(std::span<double> out) const {
    for (std::size_t j = 0; j < v.size(); ++j) out[j] = u_bar(j) + v[j];
  }
  void z(std::span<double> out) const {
    for (std::size_t j = 0; j < v.size(); ++j) out[j] = -u_bar(j) / rho + v[j];
  }
  Vector x() const {
    Vector out(v.size());
    x(out);
    return out;
  }
  Vector z() const {
    Vector out(v.size());
    z(out);
    return out;
  }
};

/// One iteration of the efficient strongly convex method on block i.
///
/// The generic oracle needs y^(k) as a dense vector, so this form pays O(N)
/// per step to materialize it; problems with cheap aggregates (the ERM dual)
/// use their own stepper.
template <class Problem>
void apcg_step_efficient(const Problem& problem, ApcgEfficientState& s, std::size_t i) {
  const auto& part = problem.partition();
  part.check_dimension(s.v.size(), "APCG efficient state");
  const std::size_t m = part.max_block_size();
  if (s.y.size() != s.v.size()) s.y.resize(s.v.size());
  if (s.grad.size() < m) s.grad.resize(m);
  if (s.blk.size() < m) s.blk.resize(m);

  const double n = static_cast<double>(part.num_blocks());
  const double na = n * s.alpha;
  s.y_point(s.y);

  const std::size_t off = part.offset(i), sz = part.size(i);
  std::span<double> g(s.grad.data(), sz);
  problem.smooth().partial_gradient(s.y, i, g);

  // h = argmin na L_i/2 ||h||^2 + <g, h> + Psi_i(t0 + h), t0 = z^(k)_i
  const double weight = na * problem.lipschitz()[i];
  std::span<double> t(s.blk.data(), sz);
  for (std::size_t j = 0; j < sz; ++j) t[j] = -s.u_bar(off + j) + s.v[off + j] - g[j] / weight;
  problem.regularizer().prox_block(i, std::span<const double>(t.data(), sz), weight, t);

  const double cu = (1.0 - na) / 2.0;
  const double cv = (1.0 + na) / 2.0;
  for (std::size_t j = 0; j < sz; ++j) {
    const double h = t[j] - (-s.u_bar(off + j) + s.v[off + j]);
    s.u_tilde[off + j] -= cu * h / s.scale;
    s.v[off + j] += cv * h;
  }
  s.scale *= s.rho;
  if (s.scale < ApcgEfficientState::renormalize_below) s.renormalize();
  ++s.k;
}

template <class Problem>
void apcg_step_efficient(const Problem& problem, ApcgEfficientState& s, BlockSampler& rng) {
  apcg_step_efficient(problem, s, rng(problem.num_blocks()));
}

}  // namespace apcg
