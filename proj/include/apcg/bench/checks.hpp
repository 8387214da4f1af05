#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "apcg/baselines/afg.hpp"
#include "apcg/core/errors.hpp"
#include "apcg/core/regularizers.hpp"
#include "apcg/core/weighted_norm.hpp"
#include "apcg/data/libsvm.hpp"
#include "apcg/data/synthetic.hpp"
#include "apcg/erm/apcg_erm.hpp"
#include "apcg/erm/oracles.hpp"
#include "apcg/problems/quadratic.hpp"
#include "apcg/solver/diagnostics.hpp"
#include "apcg/solver/efficient.hpp"
#include "apcg/solver/explicit.hpp"

namespace apcg {

struct CheckConfig {
  std::size_t lasso_n = 20;   // blocks of the lasso-type instance
  std::size_t erm_n = 200;    // examples of the ERM instance
  std::size_t erm_d = 50;
  std::size_t seeds = 20;     // envelope average
  std::size_t epochs = 50;    // envelope and duality checks
  std::uint64_t seed = 0;
  /// Test hook: every alpha root is multiplied by this. Anything but 1
  /// breaks gamma_{k+1} = n^2 alpha_k^2.
  double corrupt_alpha = 1.0;
  double envelope_slack = 1.2;

  void validate() const {
    constexpr std::size_t desk = 1000;
    if (lasso_n == 0 || erm_n == 0 || erm_d == 0) throw config_error("check: sizes must be positive");
    if (lasso_n > desk || erm_n > desk) throw config_error("check: desk-scale sizes only (n <= 1000)");
    if (seeds == 0) throw config_error("check: need at least one seed");
    if (!(corrupt_alpha > 0.0)) throw config_error("check: corrupt_alpha must be positive");
  }
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;     // worst observed value of the checked quantity
  double threshold = 0.0;  // pass iff worst <= threshold
};

namespace detail {

inline CheckResult verdict(std::string name, double worst, double threshold) {
  return {std::move(name), worst <= threshold, worst, threshold};
}

// F* of a composite problem from a long AFG run
template <class Problem>
double reference_optimum(const Problem& prob, std::size_t iters) {
  AfgState s(Vector(prob.dimension(), 0.0));
  AfgOptions opt;
  double best = prob.objective(s.x);
  for (std::size_t k = 0; k < iters; ++k) {
    afg_step(prob, s, opt);
    best = std::min(best, prob.objective(s.x));
  }
  return best;
}

}  // namespace detail

/// Runs the sequence, equivalence, duality and rate diagnostics at desk
/// scale. A check passes iff its worst observed value is within threshold.
inline std::vector<CheckResult> check_invariants(const CheckConfig& cfg) {
  cfg.validate();
  std::vector<CheckResult> out;
  const auto alpha_solver = [f = cfg.corrupt_alpha](double g, double m, std::size_t n) {
    return f * solve_alpha(g, m, n);
  };

  {  // sequence properties
    double worst = -infinity, worst_lambda = -infinity;
    for (std::size_t n : {std::size_t(1), std::size_t(2), std::size_t(10), cfg.lasso_n}) {
      for (double mu : {0.0, 1e-6, 0.01, 1.0}) {
        for (double g0 : {std::max(mu, 0.1), 1.0}) {
          ApcgSchedule sched(n, mu, g0, alpha_solver);
          for (int k = 0; k < 10000; ++k) sched.step();
          const auto r = check_schedule(sched);
          worst = std::max({worst, r.alpha_range, r.gamma_range, r.monotone, r.gamma_alpha});
          worst_lambda = std::max(worst_lambda, r.lambda_bound);
        }
      }
    }
    out.push_back(detail::verdict("schedule_relations", worst, 1e-12));
    out.push_back(detail::verdict("schedule_lambda_bound", worst_lambda, 1e-12));
  }

  auto f = random_diagonally_dominant_quadratic(cfg.lasso_n, cfg.seed);
  L1Regularizer psi(0.1);
  CompositeProblem lasso(f, psi);
  const Vector x0(cfg.lasso_n, 1.0);

  {  // theta coefficients, convex combination and Psi_hat
    ApcgSchedule sched(cfg.lasso_n, f.mu(), 1.0, alpha_solver);
    BlockSampler rng(cfg.seed);
    const auto h = record_general(lasso, x0, sched, rng, 200);
    const auto th = check_theta(sched, 200);
    out.push_back(detail::verdict("theta_nonnegative", -th.min_coefficient, 0.0));
    out.push_back(detail::verdict("theta_sum", th.sum_error, 1e-12));
    out.push_back(detail::verdict("convex_combination", convex_combination_error(h, sched), 1e-10));
    out.push_back(detail::verdict("psi_hat_bound", psi_hat_margin(lasso, h, sched), 1e-12));
  }

  {  // explicit vs efficient
    double dev = 0.0;
    for (std::uint64_t s = 0; s < 5; ++s) {
      const double alpha = std::sqrt(f.mu()) / double(cfg.lasso_n);
      ApcgExplicitState a(x0);
      ApcgEfficientState b(x0, alpha);
      BlockSampler r1(cfg.seed + s), r2(cfg.seed + s);
      for (int k = 0; k < 500; ++k) {
        apcg_step_sc(lasso, a, alpha, r1);
        apcg_step_efficient(lasso, b, r2);
        dev = std::max(dev, max_abs_diff(a.x, b.x()));
      }
    }
    out.push_back(detail::verdict("efficient_equivalence", dev, 1e-8));
  }

  SyntheticSpec spec;
  spec.n = cfg.erm_n;
  spec.d = cfg.erm_d;
  spec.seed = cfg.seed;
  ErmProblem<SmoothedHingeLoss> erm(premultiply_labels(synth_binary(spec)), SmoothedHingeLoss(1.0), 1e-3);

  {  // specialized ERM solver vs the efficient generic form
    ErmComposite<SmoothedHingeLoss> comp(erm, Splitting::relocated);
    const auto prob = comp.problem();
    double dev = 0.0, drift = 0.0;
    for (std::uint64_t s = 0; s < 3; ++s) {
      auto a = make_erm_state(erm);
      ApcgEfficientState b(Vector(erm.n(), 0.0), a.alpha);
      BlockSampler r1(cfg.seed + s), r2(cfg.seed + s);
      for (int k = 0; k < 500; ++k) {
        apcg_erm_step(erm, a, r1);
        apcg_step_efficient(prob, b, r2);
        dev = std::max(dev, max_abs_diff(a.x(), b.x()));
      }
      drift = std::max(drift, aggregate_drift(erm, a));
    }
    out.push_back(detail::verdict("erm_equivalence", dev, 1e-8));
    out.push_back(detail::verdict("erm_aggregate_drift", drift, 1e-8));
  }

  {  // weak duality and the subgradient gap bound
    auto s = make_erm_state(erm);
    BlockSampler rng(cfg.seed);
    double neg_gap = -infinity, excess = -infinity;
    for (std::size_t e = 0; e <= cfg.epochs; ++e) {
      const auto r = primal_dual_report(erm, erm_dual_iterate(erm, s), double(e));
      neg_gap = std::max(neg_gap, -r.gap);
      excess = std::max(excess, r.gap - r.subgrad_gap_bound);
      for (std::size_t t = 0; t < erm.n(); ++t) apcg_erm_step(erm, s, rng);
    }
    out.push_back(detail::verdict("weak_duality", neg_gap, 1e-10));
    out.push_back(detail::verdict("gap_subgradient_bound", excess, 1e-10));
  }

  {  // rate envelope on the seed-averaged objective
    const double fstar = detail::reference_optimum(lasso, 20000);
    AfgState ref(Vector(cfg.lasso_n, 0.0));
    for (int k = 0; k < 20000; ++k) afg_step(lasso, ref, AfgOptions{});
    const double r0 = weighted_distance(x0, ref.x, f.lipschitz(), f.partition());
    const double gamma0 = 1.0;
    const double gap0 = lasso.objective(x0) - fstar;
    std::vector<double> mean(cfg.epochs + 1, 0.0);
    for (std::size_t s = 0; s < cfg.seeds; ++s) {
      ApcgSchedule sched(cfg.lasso_n, f.mu(), gamma0, alpha_solver);
      ApcgExplicitState st(x0);
      BlockSampler rng(cfg.seed + 1000 + s);
      mean[0] += gap0;
      for (std::size_t e = 1; e <= cfg.epochs; ++e) {
        for (std::size_t t = 0; t < cfg.lasso_n; ++t) apcg_step_general(lasso, st, sched, rng);
        mean[e] += lasso.objective(st.x) - fstar;
      }
    }
    // F - F* is only resolved down to a few ulps of F*; epochs whose bound is
    // below that cannot be compared and end the horizon.
    const double resolution = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(fstar));
    double ratio = 0.0;
    for (std::size_t e = 0; e <= cfg.epochs; ++e) {
      const double bound = envelope_bound(cfg.lasso_n, f.mu(), gamma0, e * cfg.lasso_n, gap0, r0 * r0);
      if (bound < resolution) break;
      ratio = std::max(ratio, mean[e] / double(cfg.seeds) / bound);
    }
    out.push_back(detail::verdict("rate_envelope_ratio", ratio, cfg.envelope_slack));
  }
  return out;
}

}  // namespace apcg
