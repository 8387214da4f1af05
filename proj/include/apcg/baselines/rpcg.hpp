#pragma once

#include <span>

#include "apcg/core/oracles.hpp"
#include "apcg/core/rng.hpp"
#include "apcg/erm/problem.hpp"

namespace apcg {

/// Randomized proximal coordinate gradient: one block prox with weight L_i
/// at x_i - grad_i f(x) / L_i. `scratch` needs the largest block size.
template <class Problem>
void rpcg_step(const Problem& problem, std::span<double> x, std::size_t i, Vector& scratch) {
  const auto& part = problem.partition();
  part.check_dimension(x.size(), "rpcg_step");
  const std::size_t off = part.offset(i), sz = part.size(i);
  if (scratch.size() < 2 * sz) scratch.resize(2 * sz);
  std::span<double> g(scratch.data(), sz), c(scratch.data() + sz, sz);
  problem.smooth().partial_gradient(x, i, g);
  const double L = problem.lipschitz()[i];
  for (std::size_t j = 0; j < sz; ++j) c[j] = x[off + j] - g[j] / L;
  problem.regularizer().prox_block(i, c, L, x.subspan(off, sz));
}

template <class Problem>
void rpcg_step(const Problem& problem, std::span<double> x, BlockSampler& rng, Vector& scratch) {
  rpcg_step(problem, x, rng(problem.num_blocks()), scratch);
}

/// RPCG on the relocated ERM dual with Ax kept in sync, O(nnz(A_i)) per step.
struct RpcgErmState {
  Vector x;   // dual iterate
  Vector Ax;  // A x
};

template <ErmLoss Loss>
RpcgErmState make_rpcg_erm_state(const ErmProblem<Loss>& p) {
  return {Vector(p.n(), 0.0), Vector(p.d(), 0.0)};
}

template <ErmLoss Loss>
void rpcg_erm_step(const ErmProblem<Loss>& p, std::span<const double> lipschitz, RpcgErmState& s,
                   std::size_t i) {
  const double n = static_cast<double>(p.n());
  const double L = lipschitz[i];
  const double g = p.A().col_dot(i, s.Ax) / (p.lambda() * n * n) + p.gamma() / n * s.x[i];
  const double center = s.x[i] - g / L;
  const double xi = p.loss().minimize_conj_quadratic(i, n * L - p.gamma(), -n * L * center);
  const double h = xi - s.x[i];
  if (h != 0.0) {
    s.x[i] = xi;
    p.A().axpy_col(i, h, s.Ax);
  }
}

}  // namespace apcg
