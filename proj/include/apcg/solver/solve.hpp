#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "apcg/core/errors.hpp"
#include "apcg/core/oracles.hpp"
#include "apcg/core/rng.hpp"
#include "apcg/solver/efficient.hpp"
#include "apcg/solver/explicit.hpp"
#include "apcg/solver/schedule.hpp"

namespace apcg {

enum class Variant { general, strongly_convex, non_strongly_convex, efficient };

struct SolveOptions {
  Variant variant = Variant::general;
  // general: gamma_0 in [mu, 1], default 1. non_strongly_convex: alpha_{-1} =
  // sqrt(gamma0)/n, i.e. the same start as general with mu = 0.
  std::optional<double> gamma0;
  std::size_t max_iters = 0;
  std::uint64_t seed = 0;
  // iterations between trace points; 0 means n (one epoch)
  std::size_t trace_every = 0;
  // stop once gap(x) <= tolerance at a trace point; needs `gap`
  std::optional<double> tolerance;
  std::function<double(std::span<const double>)> gap;
  // called at every trace point; returning true stops the run
  std::function<bool(std::size_t k, std::span<const double> x)> callback;
};

struct TracePoint {
  std::size_t iteration;
  double objective;
  double gap;  // NaN without a gap functional
};

struct SolveResult {
  Vector x;
  std::vector<TracePoint> trace;
  std::size_t iterations = 0;
};

template <class Problem>
SolveResult solve(const Problem& problem, std::span<const double> x0, const SolveOptions& opt) {
  const auto& part = problem.partition();
  part.check_dimension(x0.size(), "solve x0");
  const std::size_t n = part.num_blocks();
  const double mu = problem.mu();
  if (!(mu >= 0.0 && mu <= 1.0)) throw config_error("solve: mu must lie in [0, 1]");
  if ((opt.variant == Variant::strongly_convex || opt.variant == Variant::efficient) && !(mu > 0.0))
    throw config_error("solve: strongly convex variants require mu > 0");
  if (opt.variant == Variant::efficient && !(std::sqrt(mu) / static_cast<double>(n) < 1.0))
    throw config_error("solve: efficient variant requires sqrt(mu)/n < 1");
  if (opt.tolerance && !opt.gap) throw config_error("solve: tolerance requires a gap functional");
  if (opt.gamma0 && opt.variant != Variant::general && opt.variant != Variant::non_strongly_convex)
    throw config_error("solve: gamma0 applies to the general and mu = 0 variants only");
  if (!std::isfinite(problem.objective(x0))) throw input_error("solve: x0 outside dom(Psi)");

  const std::size_t every = opt.trace_every == 0 ? n : opt.trace_every;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  BlockSampler rng(opt.seed);
  SolveResult res;

  auto record = [&](std::size_t k, std::span<const double> x) {
    const double g = opt.gap ? opt.gap(x) : nan;
    res.trace.push_back({k, problem.objective(x), g});
    if (opt.tolerance && g <= *opt.tolerance) return true;
    return opt.callback ? opt.callback(k, x) : false;
  };

  auto finish = [&](std::size_t k, Vector x) {
    res.iterations = k;
    if (res.trace.empty() || res.trace.back().iteration != k) record(k, x);
    res.x = std::move(x);
    return res;
  };

  if (opt.variant == Variant::efficient) {
    ApcgEfficientState s(x0, std::sqrt(mu) / static_cast<double>(n));
    Vector x(x0.begin(), x0.end());
    if (record(0, x) || opt.max_iters == 0) return finish(0, std::move(x));
    for (std::size_t k = 1; k <= opt.max_iters; ++k) {
      apcg_step_efficient(problem, s, rng);
      if (k % every == 0 || k == opt.max_iters) {
        s.x(x);
        if (record(k, x)) return finish(k, std::move(x));
      }
    }
    s.x(x);
    return finish(opt.max_iters, std::move(x));
  }

  ApcgExplicitState s(x0);
  if (record(0, s.x) || opt.max_iters == 0) return finish(0, s.x);

  std::optional<ApcgSchedule> sched;
  double alpha = 0.0;
  switch (opt.variant) {
    case Variant::general:
      sched.emplace(n, mu, opt.gamma0.value_or(1.0));
      break;
    case Variant::strongly_convex:
      alpha = std::sqrt(mu) / static_cast<double>(n);
      break;
    case Variant::non_strongly_convex: {
      const double g0 = opt.gamma0.value_or(1.0);
      if (!(g0 > 0.0 && g0 <= 1.0)) throw config_error("solve: gamma0 must lie in (0, 1]");
      alpha = std::sqrt(g0) / static_cast<double>(n);
      break;
    }
    case Variant::efficient:
      break;
  }

  for (std::size_t k = 1; k <= opt.max_iters; ++k) {
    switch (opt.variant) {
      case Variant::general:
        apcg_step_general(problem, s, *sched, rng);
        break;
      case Variant::strongly_convex:
        apcg_step_sc(problem, s, alpha, rng);
        break;
      case Variant::non_strongly_convex:
        alpha = apcg_step_nsc(problem, s, alpha, rng);
        break;
      case Variant::efficient:
        break;
    }
    if (k % every == 0 || k == opt.max_iters)
      if (record(k, s.x)) return finish(k, s.x);
  }
  return finish(opt.max_iters, s.x);
}

}  // namespace apcg
