#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "apcg/core/errors.hpp"

namespace apcg {

/// Root in (0, 1/n] of n^2 a^2 = (1 - a) gamma + a mu.
///
/// Uses the rationalized root 2 gamma / ((gamma - mu) + sqrt((gamma - mu)^2 + 4 n^2 gamma))
/// whenever gamma >= mu, which has no cancellation; the textbook form is
/// stable in the remaining case.
inline double solve_alpha(double gamma, double mu, std::size_t n) {
  if (n == 0) throw input_error("solve_alpha: n must be >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw input_error("solve_alpha: gamma must lie in (0, 1]");
  if (!(mu >= 0.0 && mu <= 1.0)) throw input_error("solve_alpha: mu must lie in [0, 1]");
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  const double d = gamma - mu;
  const double disc = std::sqrt(d * d + 4.0 * nn * gamma);
  const double alpha = d >= 0.0 ? 2.0 * gamma / (d + disc) : (-d + disc) / (2.0 * nn);
  const double upper = 1.0 / static_cast<double>(n);
  if (!(alpha > 0.0) || alpha > upper * (1.0 + 1e-12))
    throw invariant_error("solve_alpha: root outside (0, 1/n]");
  return std::min(alpha, upper);
}

/// Non-strongly-convex recursion a_k = (sqrt(a^4 + 4 a^2) - a^2) / 2, which
/// is solve_alpha with mu = 0 and gamma = n^2 a_{k-1}^2.
inline double next_alpha_nsc(double alpha_prev) {
  const double a2 = alpha_prev * alpha_prev;
  // (sqrt(a^4 + 4a^2) - a^2)/2 rationalized: 2a^2 / (sqrt(a^4 + 4a^2) + a^2)
  return 2.0 * a2 / (std::sqrt(a2 * a2 + 4.0 * a2) + a2);
}

struct ScheduleStep {
  double alpha;       // alpha_k
  double gamma_next;  // gamma_{k+1}
  double beta;        // beta_k
};

/// The scalar sequences alpha_k, gamma_k, beta_k, lambda_k of the general
/// method, with full history for diagnostics.
///
/// gamma_.size() == k + 1 after k steps; alpha_, beta_ have k entries and
/// lambda_ has k + 1 (lambda_0 = 1).
class ApcgSchedule {
 public:
  using AlphaSolver = std::function<double(double gamma, double mu, std::size_t n)>;

  ApcgSchedule(std::size_t n, double mu, double gamma0, AlphaSolver solver = solve_alpha)
      : n_(n), mu_(mu), solver_(std::move(solver)) {
    if (n == 0) throw config_error("ApcgSchedule: n must be >= 1");
    if (!(mu >= 0.0 && mu <= 1.0)) throw config_error("ApcgSchedule: mu must lie in [0, 1]");
    if (!(gamma0 > 0.0 && gamma0 <= 1.0 && gamma0 >= mu))
      throw config_error("ApcgSchedule: gamma0 must satisfy 0 < gamma0, mu <= gamma0 <= 1");
    gamma_.push_back(gamma0);
    lambda_.push_back(1.0);
  }

  ScheduleStep step() {
    const double g = gamma_.back();
    const double a = solver_(g, mu_, n_);
    const double gn = (1.0 - a) * g + a * mu_;
    const double b = a * mu_ / gn;
    alpha_.push_back(a);
    beta_.push_back(b);
    gamma_.push_back(gn);
    lambda_.push_back(lambda_.back() * (1.0 - a));
    return {a, gn, b};
  }

  std::size_t n() const noexcept { return n_; }
  double mu() const noexcept { return mu_; }
  double gamma0() const noexcept { return gamma_.front(); }
  std::size_t steps() const noexcept { return alpha_.size(); }

  double alpha(std::size_t k) const { return alpha_.at(k); }
  double gamma(std::size_t k) const { return gamma_.at(k); }
  double beta(std::size_t k) const { return beta_.at(k); }
  double lambda(std::size_t k) const { return lambda_.at(k); }

  const std::vector<double>& alphas() const noexcept { return alpha_; }
  const std::vector<double>& gammas() const noexcept { return gamma_; }
  const std::vector<double>& betas() const noexcept { return beta_; }
  const std::vector<double>& lambdas() const noexcept { return lambda_; }

 private:
  std::size_t n_;
  double mu_;
  AlphaSolver solver_;
  std::vector<double> alpha_, beta_, gamma_, lambda_;
};

/// min{(1 - sqrt(mu)/n)^k, (2n / (2n + k sqrt(gamma0)))^2}
inline double rate_envelope(std::size_t n, double mu, double gamma0, std::size_t k) {
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  const double linear = std::pow(1.0 - std::sqrt(mu) / nd, kd);
  const double sub = 2.0 * nd / (2.0 * nd + kd * std::sqrt(gamma0));
  return std::min(linear, sub * sub);
}

}  // namespace apcg
