#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "apcg/core/errors.hpp"
#include "apcg/core/oracles.hpp"
#include "apcg/core/rng.hpp"
#include "apcg/core/vector_ops.hpp"
#include "apcg/solver/schedule.hpp"

namespace apcg {

/// Full-vector iterates x^(k), y^(k), z^(k) of the general method and its two
/// simplified forms. y holds the point at which the last partial gradient
/// was taken.
struct ApcgExplicitState {
  Vector x, y, z;
  std::size_t k = 0;
  Vector grad;  // scratch, one block
  Vector blk;   // scratch, one block

  ApcgExplicitState() = default;
  explicit ApcgExplicitState(std::span<const double> x0)
      : x(x0.begin(), x0.end()), y(x0.begin(), x0.end()), z(x0.begin(), x0.end()) {}
};

namespace detail {

template <class Problem>
void ensure_scratch(const Problem& problem, ApcgExplicitState& s) {
  problem.partition().check_dimension(s.x.size(), "APCG state");
  const std::size_t m = problem.partition().max_block_size();
  if (s.grad.size() < m) s.grad.resize(m);
  if (s.blk.size() < m) s.blk.resize(m);
}

// center_i = w_i - g / weight; z_i <- prox(center_i, weight)
template <class Problem>
void prox_gradient_block(const Problem& problem, std::size_t i, std::span<const double> w_i,
                         std::span<const double> g, double weight, std::span<double> out) {
  for (std::size_t j = 0; j < w_i.size(); ++j) out[j] = w_i[j] - g[j] / weight;
  problem.regularizer().prox_block(i, std::span<const double>(out.data(), out.size()), weight,
                                   out);
}

}  // namespace detail

/// One iteration of the general method on block i; advances `sched` by one step.
///
/// The z-update touches block i with a proximal step and moves every other
/// block to (1 - beta) z + beta y; x^(k+1) equals y^(k) off block i.
template <class Problem>
void apcg_step_general(const Problem& problem, ApcgExplicitState& s, ApcgSchedule& sched,
                       std::size_t i) {
  detail::ensure_scratch(problem, s);
  const auto& part = problem.partition();
  const double n = static_cast<double>(part.num_blocks());
  const double mu = sched.mu();
  const double gamma_k = sched.gamma(sched.steps());
  const auto [alpha, gamma_next, beta] = sched.step();

  const double denom = alpha * gamma_k + gamma_next;
  const double cz = alpha * gamma_k / denom;
  const double cx = gamma_next / denom;
  for (std::size_t j = 0; j < s.x.size(); ++j) s.y[j] = cz * s.z[j] + cx * s.x[j];

  const std::size_t off = part.offset(i), sz = part.size(i);
  std::span<double> g(s.grad.data(), sz);
  problem.smooth().partial_gradient(s.y, i, g);

  // block i: remember z^(k)_i before overwriting z
  std::span<double> zold(s.blk.data(), sz);
  for (std::size_t j = 0; j < sz; ++j) zold[j] = s.z[off + j];

  for (std::size_t j = 0; j < s.z.size(); ++j) s.z[j] = (1.0 - beta) * s.z[j] + beta * s.y[j];
  const double weight = n * alpha * problem.lipschitz()[i];
  std::span<double> zi(s.z.data() + off, sz);
  detail::prox_gradient_block(problem, i, std::span<const double>(zi.data(), sz), g, weight, zi);

  for (std::size_t j = 0; j < s.x.size(); ++j) s.x[j] = s.y[j];
  for (std::size_t j = 0; j < sz; ++j)
    s.x[off + j] = s.y[off + j] + n * alpha * (zi[j] - zold[j]) +
                   mu / n * (zold[j] - s.y[off + j]);
  ++s.k;
}

template <class Problem>
void apcg_step_general(const Problem& problem, ApcgExplicitState& s, ApcgSchedule& sched,
                       BlockSampler& rng) {
  apcg_step_general(problem, s, sched, rng(problem.num_blocks()));
}

/// One iteration of the strongly convex form (gamma0 = mu > 0, constant
/// alpha = sqrt(mu)/n), written with full-vector updates.
template <class Problem>
void apcg_step_sc(const Problem& problem, ApcgExplicitState& s, double alpha, std::size_t i) {
  if (!(problem.mu() > 0.0)) throw config_error("apcg_step_sc: requires mu > 0");
  detail::ensure_scratch(problem, s);
  const auto& part = problem.partition();
  const double n = static_cast<double>(part.num_blocks());
  const std::size_t N = s.x.size();

  for (std::size_t j = 0; j < N; ++j) s.y[j] = (s.x[j] + alpha * s.z[j]) / (1.0 + alpha);

  const std::size_t off = part.offset(i), sz = part.size(i);
  std::span<double> g(s.grad.data(), sz);
  problem.smooth().partial_gradient(s.y, i, g);

  // x^(k+1) = y + n a (z^(k+1) - z^(k)) + n a^2 (z^(k) - y); the z-part of the
  // update is accumulated before z is overwritten.
  for (std::size_t j = 0; j < N; ++j)
    s.x[j] = s.y[j] - n * alpha * s.z[j] + n * alpha * alpha * (s.z[j] - s.y[j]);
  for (std::size_t j = 0; j < N; ++j) s.z[j] = (1.0 - alpha) * s.z[j] + alpha * s.y[j];
  const double weight = n * alpha * problem.lipschitz()[i];
  std::span<double> zi(s.z.data() + off, sz);
  detail::prox_gradient_block(problem, i, std::span<const double>(zi.data(), sz), g, weight, zi);
  for (std::size_t j = 0; j < N; ++j) s.x[j] += n * alpha * s.z[j];
  ++s.k;
}

template <class Problem>
void apcg_step_sc(const Problem& problem, ApcgExplicitState& s, double alpha,
                  BlockSampler& rng) {
  apcg_step_sc(problem, s, alpha, rng(problem.num_blocks()));
}

/// One iteration of the mu = 0 form. Returns alpha_k computed from alpha_{k-1}.
template <class Problem>
double apcg_step_nsc(const Problem& problem, ApcgExplicitState& s, double alpha_prev,
                     std::size_t i) {
  if (!(alpha_prev > 0.0)) throw input_error("apcg_step_nsc: alpha_prev must be positive");
  detail::ensure_scratch(problem, s);
  const auto& part = problem.partition();
  const double n = static_cast<double>(part.num_blocks());
  const double alpha = next_alpha_nsc(alpha_prev);

  for (std::size_t j = 0; j < s.x.size(); ++j) s.y[j] = (1.0 - alpha) * s.x[j] + alpha * s.z[j];

  const std::size_t off = part.offset(i), sz = part.size(i);
  std::span<double> g(s.grad.data(), sz);
  problem.smooth().partial_gradient(s.y, i, g);

  std::span<double> zold(s.blk.data(), sz);
  for (std::size_t j = 0; j < sz; ++j) zold[j] = s.z[off + j];
  const double weight = n * alpha * problem.lipschitz()[i];
  std::span<double> zi(s.z.data() + off, sz);
  detail::prox_gradient_block(problem, i, zold, g, weight, zi);

  for (std::size_t j = 0; j < s.x.size(); ++j) s.x[j] = s.y[j];
  for (std::size_t j = 0; j < sz; ++j) s.x[off + j] += n * alpha * (zi[j] - zold[j]);
  ++s.k;
  return alpha;
}

template <class Problem>
double apcg_step_nsc(const Problem& problem, ApcgExplicitState& s, double alpha_prev,
                     BlockSampler& rng) {
  return apcg_step_nsc(problem, s, alpha_prev, rng(problem.num_blocks()));
}

}  // namespace apcg
