#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "apcg/baselines/afg.hpp"
#include "apcg/baselines/rpcg.hpp"
#include "apcg/baselines/sdca.hpp"
#include "apcg/core/errors.hpp"
#include "apcg/core/rng.hpp"
#include "apcg/erm/apcg_erm.hpp"
#include "apcg/erm/oracles.hpp"
#include "apcg/erm/problem.hpp"

namespace apcg {

enum class ErmSolver { apcg, sdca, afg, rpcg };

inline std::string_view solver_name(ErmSolver s) {
  switch (s) {
    case ErmSolver::apcg: return "apcg";
    case ErmSolver::sdca: return "sdca";
    case ErmSolver::afg: return "afg";
    case ErmSolver::rpcg: return "rpcg";
  }
  return "?";
}

inline ErmSolver parse_solver(std::string_view name) {
  for (auto s : {ErmSolver::apcg, ErmSolver::sdca, ErmSolver::afg, ErmSolver::rpcg})
    if (solver_name(s) == name) return s;
  throw config_error("unknown solver '" + std::string(name) + "'");
}

struct BaselineConfig {
  ErmSolver method = ErmSolver::apcg;
  std::uint64_t seed = 0;
  std::size_t max_epochs = 100;
  AfgOptions afg;
  /// Stop at the first epoch whose gap is at most this.
  std::optional<double> gap_tolerance;

  void validate() const {
    afg.validate();
    if (gap_tolerance && !(*gap_tolerance > 0.0)) throw config_error("gap tolerance must be positive");
  }
};

struct ErmRunResult {
  std::vector<PrimalDualReport> trace;  // one row per epoch, starting at epoch 0
  std::vector<double> wall_time_s;      // solver time only, cumulative
  Vector x;                             // final dual iterate
  std::optional<std::size_t> epochs_to_tolerance;
};

/// Runs one solver on the dual from x = 0, reporting at every epoch boundary.
/// An epoch is n coordinate steps, or one AFG iteration.
template <ErmLoss Loss>
ErmRunResult run_erm(const ErmProblem<Loss>& p, const BaselineConfig& cfg) {
  cfg.validate();
  using clock = std::chrono::steady_clock;
  ErmRunResult res;
  BlockSampler rng(cfg.seed);
  double elapsed = 0.0;

  const auto record = [&](std::size_t epoch, const Vector& x) {
    res.trace.push_back(primal_dual_report(p, x, static_cast<double>(epoch)));
    res.wall_time_s.push_back(elapsed);
    res.x = x;
    if (cfg.gap_tolerance && res.trace.back().gap <= *cfg.gap_tolerance) {
      res.epochs_to_tolerance = epoch;
      return true;
    }
    return false;
  };
  const auto loop = [&](auto&& epoch_fn, auto&& iterate_fn) {
    if (record(0, iterate_fn())) return;
    for (std::size_t e = 1; e <= cfg.max_epochs; ++e) {
      const auto t0 = clock::now();
      epoch_fn();
      elapsed += std::chrono::duration<double>(clock::now() - t0).count();
      if (record(e, iterate_fn())) return;
    }
  };

  switch (cfg.method) {
    case ErmSolver::apcg: {
      auto s = make_erm_state(p);
      loop([&] { for (std::size_t t = 0; t < p.n(); ++t) apcg_erm_step(p, s, rng); },
           [&] { return erm_dual_iterate(p, s); });
      break;
    }
    case ErmSolver::sdca: {
      auto s = make_sdca_state(p);
      loop([&] { sdca_epoch(p, s, rng); }, [&] { return s.x; });
      break;
    }
    case ErmSolver::rpcg: {
      auto s = make_rpcg_erm_state(p);
      const auto c = erm_constants(p);
      loop([&] { for (std::size_t t = 0; t < p.n(); ++t) rpcg_erm_step(p, c.lipschitz, s, rng(p.n())); },
           [&] { return s.x; });
      break;
    }
    case ErmSolver::afg: {
      ErmComposite<Loss> comp(p, Splitting::relocated);
      const auto prob = comp.problem();
      AfgOptions opt = cfg.afg;
      if (!opt.strong_convexity) opt.strong_convexity = p.gamma() / static_cast<double>(p.n());
      AfgState s(Vector(p.n(), 0.0));
      loop([&] { afg_step(prob, s, opt); }, [&] { return s.x; });
      break;
    }
  }
  return res;
}

}  // namespace apcg
