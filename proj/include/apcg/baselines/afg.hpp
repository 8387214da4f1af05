#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>

#include "apcg/core/errors.hpp"
#include "apcg/core/oracles.hpp"
#include "apcg/core/vector_ops.hpp"

namespace apcg {

struct AfgOptions {
  /// 1/L for the first trial; when unset, 1 / max_i L_i.
  std::optional<double> initial_step;
  double backtrack = 0.5;
  std::size_t max_backtracks = 100;
  /// Euclidean strong convexity of f. When set the momentum is the constant
  /// (sqrt(L) - sqrt(sigma)) / (sqrt(L) + sqrt(sigma)) at the current L,
  /// otherwise the t_k sequence of FISTA.
  std::optional<double> strong_convexity;

  void validate() const {
    if (initial_step && !(*initial_step > 0.0 && std::isfinite(*initial_step)))
      throw config_error("AFG: initial step must be positive");
    if (!(backtrack > 0.0 && backtrack < 1.0))
      throw config_error("AFG: backtracking factor must lie in (0, 1)");
    if (strong_convexity && !(*strong_convexity >= 0.0))
      throw config_error("AFG: strong convexity must be nonnegative");
  }
};

/// Accelerated proximal full gradient with backtracking on the quadratic
/// upper bound. The step doubles after every accepted iteration.
struct AfgState {
  Vector x, x_prev, y;
  double L = 0.0;
  double t = 1.0;
  std::size_t iterations = 0;
  std::size_t backtracks = 0;  // total over the run
  Vector grad, trial, diff;

  AfgState() = default;
  explicit AfgState(std::span<const double> x0) : x(x0.begin(), x0.end()), x_prev(x), y(x) {}
};

namespace detail {

template <class Problem>
void full_prox(const Problem& problem, std::span<const double> center, double weight,
               std::span<double> out) {
  const auto& part = problem.partition();
  for (std::size_t i = 0; i < part.num_blocks(); ++i)
    problem.regularizer().prox_block(i, part.block(center, i), weight, part.block(out, i));
}

}  // namespace detail

template <class Problem>
void afg_step(const Problem& problem, AfgState& s, const AfgOptions& opt) {
  const std::size_t N = s.x.size();
  problem.partition().check_dimension(N, "afg_step");
  if (s.L == 0.0) {
    if (opt.initial_step) {
      s.L = 1.0 / *opt.initial_step;
    } else {
      const auto lip = problem.lipschitz();
      s.L = *std::max_element(lip.begin(), lip.end());
    }
  }
  s.grad.resize(N);
  s.trial.resize(N);
  s.diff.resize(N);

  const auto& f = problem.smooth();
  const double fy = f.value(s.y);
  f.gradient(s.y, s.grad);
  for (std::size_t b = 0;; ++b) {
    if (b > opt.max_backtracks) throw step_size_error("AFG: line search did not terminate");
    for (std::size_t j = 0; j < N; ++j) s.diff[j] = s.y[j] - s.grad[j] / s.L;
    detail::full_prox(problem, s.diff, s.L, s.trial);
    double lin = 0.0, sq = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      const double d = s.trial[j] - s.y[j];
      lin += s.grad[j] * d;
      sq += d * d;
    }
    const double ft = f.value(s.trial);
    // relative slack absorbs rounding in f near convergence
    if (ft <= fy + lin + 0.5 * s.L * sq + 1e-14 * std::max(1.0, std::abs(fy))) break;
    s.L /= opt.backtrack;
    ++s.backtracks;
  }

  double beta;
  if (opt.strong_convexity) {
    const double q = std::sqrt(std::min(1.0, *opt.strong_convexity / s.L));
    beta = (1.0 - q) / (1.0 + q);
  } else {
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * s.t * s.t));
    beta = (s.t - 1.0) / t_next;
    s.t = t_next;
  }
  std::swap(s.x_prev, s.x);
  std::swap(s.x, s.trial);
  for (std::size_t j = 0; j < N; ++j) s.y[j] = s.x[j] + beta * (s.x[j] - s.x_prev[j]);
  // y may leave dom(Psi); only prox outputs are reported
  s.L *= opt.backtrack;
  ++s.iterations;
}

}  // namespace apcg
