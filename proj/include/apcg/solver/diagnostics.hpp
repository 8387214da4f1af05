#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "apcg/core/errors.hpp"
#include "apcg/core/oracles.hpp"
#include "apcg/core/rng.hpp"
#include "apcg/solver/explicit.hpp"
#include "apcg/solver/schedule.hpp"

namespace apcg {

// Diagnostic oracles for the general method. None of this is on the solver
// path; it exists so the convergence analysis can be checked on real runs.

/// Coefficients theta^(k)_0..k with x^(k) = sum_l theta^(k)_l z^(l),
/// advanced one iteration at a time from the schedule history.
class ThetaRecursion {
 public:
  explicit ThetaRecursion(const ApcgSchedule& sched) : sched_(&sched), theta_{1.0} {}

  std::size_t k() const noexcept { return theta_.size() - 1; }
  const std::vector<double>& current() const noexcept { return theta_; }

  void advance() {
    const std::size_t k = this->k();
    if (sched_->steps() < k + 1) throw input_error("ThetaRecursion: schedule not advanced far enough");
    const double n = static_cast<double>(sched_->n());
    const double mu = sched_->mu();
    const double a = sched_->alpha(k);
    if (k == 0) {
      theta_ = {1.0 - n * a, n * a};
      return;
    }
    const double g = sched_->gamma(k);
    const double gn = sched_->gamma(k + 1);
    const double a_prev = sched_->alpha(k - 1);
    const double denom = a * g + gn;
    const double shrink = (1.0 - mu / n) * gn / denom;
    for (std::size_t l = 0; l < k; ++l) theta_[l] *= shrink;
    theta_[k] = (1.0 - mu / n) * (a * g + n * a_prev * gn) / denom - (1.0 - a) * g / (n * a);
    theta_.push_back(n * a);
  }

 private:
  const ApcgSchedule* sched_;
  std::vector<double> theta_;
};

inline std::vector<double> theta_coefficients(const ApcgSchedule& sched, std::size_t k) {
  if (sched.steps() < k) throw input_error("theta_coefficients: schedule not advanced to k");
  ThetaRecursion rec(sched);
  while (rec.k() < k) rec.advance();
  return rec.current();
}

/// Worst observed violations of the sequence properties, each expressed
/// relative to the quantity being bounded (<= 0 means satisfied).
struct ScheduleReport {
  double alpha_range = -infinity;   // sqrt(mu)/n <= alpha_k <= 1/n
  double gamma_range = -infinity;   // mu <= gamma_k <= 1
  double monotone = -infinity;      // alpha_k, gamma_k non-increasing
  double gamma_alpha = -infinity;   // |gamma_{k+1} - n^2 alpha_k^2| / gamma_{k+1}
  double lambda_bound = -infinity;  // lambda_k vs min{(1-sqrt(mu)/n)^k, (2n/(2n+k sqrt(gamma0)))^2}

  bool ok(double rel_tol) const {
    return alpha_range <= rel_tol && gamma_range <= rel_tol && monotone <= rel_tol &&
           gamma_alpha <= rel_tol && lambda_bound <= rel_tol;
  }
};

inline ScheduleReport check_schedule(const ApcgSchedule& sched) {
  ScheduleReport r;
  const double n = static_cast<double>(sched.n());
  const double mu = sched.mu();
  const double lo = std::sqrt(mu) / n;
  const double hi = 1.0 / n;
  const auto& a = sched.alphas();
  const auto& g = sched.gammas();
  const auto& lam = sched.lambdas();
  auto upd = [](double& worst, double v) { worst = std::max(worst, v); };

  for (std::size_t k = 0; k < a.size(); ++k) {
    if (lo > 0.0) upd(r.alpha_range, (lo - a[k]) / lo);
    upd(r.alpha_range, (a[k] - hi) / hi);
    if (k + 1 < a.size()) upd(r.monotone, (a[k + 1] - a[k]) / a[k]);
    upd(r.gamma_alpha, std::abs(g[k + 1] - n * n * a[k] * a[k]) / g[k + 1]);
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (mu > 0.0) upd(r.gamma_range, (mu - g[k]) / mu);
    upd(r.gamma_range, g[k] - 1.0);
    if (k + 1 < g.size()) upd(r.monotone, (g[k + 1] - g[k]) / g[k]);
  }
  for (std::size_t k = 0; k < lam.size(); ++k) {
    // below the normal range the product has lost its relative accuracy
    if (lam[k] < std::numeric_limits<double>::min()) continue;
    const double bound = rate_envelope(sched.n(), mu, sched.gamma0(), k);
    upd(r.lambda_bound, bound >= std::numeric_limits<double>::min() ? (lam[k] - bound) / bound
                                                                     : infinity);
  }
  return r;
}

/// Iterates of the general method kept in full for the convex-combination
/// and Psi-hat checks.
struct ApcgHistory {
  std::vector<Vector> x;  // x^(0..K)
  std::vector<Vector> z;  // z^(0..K)
  std::vector<std::size_t> blocks;
};

template <class Problem>
ApcgHistory record_general(const Problem& problem, std::span<const double> x0,
                           ApcgSchedule& sched, BlockSampler& rng, std::size_t iters) {
  ApcgHistory h;
  ApcgExplicitState s(x0);
  h.x.push_back(s.x);
  h.z.push_back(s.z);
  for (std::size_t k = 0; k < iters; ++k) {
    const std::size_t i = rng(problem.num_blocks());
    apcg_step_general(problem, s, sched, i);
    h.blocks.push_back(i);
    h.x.push_back(s.x);
    h.z.push_back(s.z);
  }
  return h;
}

/// max over k, j of |x^(k)_j - sum_l theta^(k)_l z^(l)_j|.
inline double convex_combination_error(const ApcgHistory& h, const ApcgSchedule& sched) {
  ThetaRecursion rec(sched);
  double worst = 0.0;
  Vector comb;
  for (std::size_t k = 0; k < h.x.size(); ++k) {
    if (k > 0) rec.advance();
    const auto& th = rec.current();
    comb.assign(h.x[k].size(), 0.0);
    for (std::size_t l = 0; l <= k; ++l) axpy(th[l], h.z[l], comb);
    worst = std::max(worst, max_abs_diff(comb, h.x[k]));
  }
  return worst;
}

/// Smallest theta coefficient and largest |sum theta - 1| over the history.
struct ThetaReport {
  double min_coefficient = infinity;
  double sum_error = 0.0;
};

inline ThetaReport check_theta(const ApcgSchedule& sched, std::size_t kmax) {
  ThetaRecursion rec(sched);
  ThetaReport r;
  for (std::size_t k = 0; k <= kmax; ++k) {
    if (k > 0) rec.advance();
    double sum = 0.0;
    for (double t : rec.current()) {
      r.min_coefficient = std::min(r.min_coefficient, t);
      sum += t;
    }
    r.sum_error = std::max(r.sum_error, std::abs(sum - 1.0));
  }
  return r;
}

/// max over k of Psi(x^(k)) - Psi_hat_k where Psi_hat_k = sum_l theta^(k)_l Psi(z^(l)).
template <class Problem>
double psi_hat_margin(const Problem& problem, const ApcgHistory& h, const ApcgSchedule& sched) {
  ThetaRecursion rec(sched);
  std::vector<double> psi_z;
  double worst = -infinity;
  for (std::size_t k = 0; k < h.x.size(); ++k) {
    if (k > 0) rec.advance();
    psi_z.push_back(eval_full(problem.regularizer(), problem.partition(), h.z[k]));
    const auto& th = rec.current();
    double hat = 0.0;
    for (std::size_t l = 0; l <= k; ++l) hat += th[l] * psi_z[l];
    const double px = eval_full(problem.regularizer(), problem.partition(), h.x[k]);
    worst = std::max(worst, px - hat);
  }
  return worst;
}

/// Expected-suboptimality bound after k iterations:
/// rate_envelope * (F(x0) - F* + gamma0/2 * ||x0 - x*||_L^2).
inline double envelope_bound(std::size_t n, double mu, double gamma0, std::size_t k,
                             double initial_gap, double r0_sq) {
  return rate_envelope(n, mu, gamma0, k) * (initial_gap + 0.5 * gamma0 * r0_sq);
}

}  // namespace apcg
