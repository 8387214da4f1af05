#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "apcg/bench/run.hpp"
#include "apcg/core/errors.hpp"
#include "apcg/data/libsvm.hpp"
#include "apcg/data/synthetic.hpp"

namespace apcg {

enum class LossKind { smoothed_hinge, square };

inline LossKind parse_loss(std::string_view s) {
  if (s == "smoothed_hinge" || s == "hinge") return LossKind::smoothed_hinge;
  if (s == "square") return LossKind::square;
  throw config_error("unknown loss '" + std::string(s) + "'");
}

inline std::string_view loss_name(LossKind k) {
  return k == LossKind::square ? "square" : "smoothed_hinge";
}

struct ExperimentConfig {
  std::variant<std::string, SyntheticSpec> data = SyntheticSpec{};
  LossKind loss = LossKind::smoothed_hinge;
  std::vector<double> lambdas{1e-4};
  double gamma = 1.0;
  std::vector<ErmSolver> solvers{ErmSolver::apcg};
  std::vector<std::uint64_t> seeds{0};
  std::size_t epochs = 100;
  std::optional<double> tolerance;
  std::string out_dir = "results";
  std::size_t jobs = 1;
  AfgOptions afg;

  void validate() const {
    if (lambdas.empty()) throw config_error("at least one lambda is required");
    for (double l : lambdas)
      if (!(l > 0.0) || !std::isfinite(l)) throw config_error("lambda must be positive");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw config_error("gamma must be positive");
    if (solvers.empty()) throw config_error("at least one solver is required");
    if (seeds.empty()) throw config_error("at least one seed is required");
    if (tolerance && !(*tolerance > 0.0)) throw config_error("tolerance must be positive");
    if (jobs == 0) throw config_error("jobs must be at least 1");
    if (const auto* s = std::get_if<SyntheticSpec>(&data)) {
      if (s->n == 0 || s->d == 0) throw config_error("synthetic n and d must be positive");
      if (!(s->sparsity > 0.0 && s->sparsity <= 1.0))
        throw config_error("synthetic sparsity must lie in (0, 1]");
    }
    afg.validate();
  }
};

/// APCG_JOBS if set to a positive integer, else 1.
inline std::size_t default_jobs() {
  if (const char* v = std::getenv("APCG_JOBS")) {
    char* end = nullptr;
    const long j = std::strtol(v, &end, 10);
    if (end != v && *end == '\0' && j > 0) return static_cast<std::size_t>(j);
  }
  return 1;
}

struct CellSummary {
  std::string dataset;
  double lambda = 0.0;
  ErmSolver solver = ErmSolver::apcg;
  std::uint64_t seed = 0;
  std::size_t epochs_run = 0;
  double final_gap = 0.0;
  std::optional<std::size_t> epochs_to_tolerance;
  std::string file;
  std::string error;  // empty on success
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string dataset_name(const ExperimentConfig& cfg) {
  if (const auto* path = std::get_if<std::string>(&cfg.data)) {
    std::string stem = std::filesystem::path(*path).filename().string();
    for (const char* ext : {".gz", ".txt", ".svm", ".libsvm"}) {
      const std::string e(ext);
      if (stem.size() > e.size() && stem.compare(stem.size() - e.size(), e.size(), e) == 0)
        stem.resize(stem.size() - e.size());
    }
    return stem;
  }
  const auto& s = std::get<SyntheticSpec>(cfg.data);
  char buf[128];
  std::snprintf(buf, sizeof buf, "synthetic_n%zu_d%zu_s%g", s.n, s.d, s.sparsity);
  return buf;
}

/// Header of every per-run trace file.
inline constexpr const char* trace_header = "epoch,primal,dual,gap,dual_subgrad_norm_sq,wall_time_s";

inline void write_trace(const std::string& path, const ErmRunResult& r) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot write '" + path + "'");
  f << trace_header << '\n';
  for (std::size_t e = 0; e < r.trace.size(); ++e) {
    const auto& t = r.trace[e];
    f << static_cast<std::size_t>(t.epoch) << ',' << format_double(t.primal) << ','
      << format_double(t.dual) << ',' << format_double(t.gap) << ','
      << format_double(t.dual_subgrad_norm_sq) << ',' << format_double(r.wall_time_s[e]) << '\n';
  }
  if (!f) throw io_error("write failure on '" + path + "'");
}

namespace detail {

inline std::string lambda_tag(double l) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", l);
  return buf;
}

template <ErmLoss Loss>
CellSummary run_cell(const ErmProblem<Loss>& p, const ExperimentConfig& cfg, const std::string& ds,
                     ErmSolver solver, std::uint64_t seed) {
  CellSummary c{ds, p.lambda(), solver, seed, 0, 0.0, std::nullopt, {}, {}};
  BaselineConfig bc;
  bc.method = solver;
  bc.seed = seed;
  bc.max_epochs = cfg.epochs;
  bc.afg = cfg.afg;
  const auto r = run_erm(p, bc);
  c.file = ds + "_lambda" + lambda_tag(p.lambda()) + "_" + std::string(solver_name(solver)) +
           "_seed" + std::to_string(seed) + ".csv";
  write_trace((std::filesystem::path(cfg.out_dir) / c.file).string(), r);
  c.epochs_run = r.trace.size() - 1;
  c.final_gap = r.trace.back().gap;
  if (cfg.tolerance)
    for (const auto& t : r.trace)
      if (t.gap <= *cfg.tolerance) {
        c.epochs_to_tolerance = static_cast<std::size_t>(t.epoch);
        break;
      }
  return c;
}

template <class Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) fn(i);
  };
  const std::size_t nthreads = std::min(jobs, count);
  if (nthreads <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// Loads the data once, runs every (lambda, solver, seed) cell and writes one
/// trace per cell plus summary.csv. Configuration and I/O problems with the
/// dataset surface before any run starts; a failing cell is reported in its
/// summary row and does not stop the others.
inline std::vector<CellSummary> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const LabeledData data = std::holds_alternative<std::string>(cfg.data)
                               ? load_libsvm(std::get<std::string>(cfg.data),
                                             cfg.loss == LossKind::square ? LabelMode::real
                                                                          : LabelMode::binary)
                               : synth_binary(std::get<SyntheticSpec>(cfg.data));
  if (data.A.cols() == 0) throw input_error("dataset has no examples");
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw io_error("cannot create '" + cfg.out_dir + "': " + ec.message());

  const std::string ds = dataset_name(cfg);
  std::shared_ptr<const SparseColMatrix> A =
      cfg.loss == LossKind::square ? std::make_shared<const SparseColMatrix>(data.A)
                                   : std::make_shared<const SparseColMatrix>(premultiply_labels(data));

  struct Cell {
    std::size_t lambda_idx;
    ErmSolver solver;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t l = 0; l < cfg.lambdas.size(); ++l)
    for (auto s : cfg.solvers)
      for (auto seed : cfg.seeds) cells.push_back({l, s, seed});

  std::vector<std::optional<ErmProblem<SmoothedHingeLoss>>> hinge(cfg.lambdas.size());
  std::vector<std::optional<ErmProblem<SquareLoss>>> square(cfg.lambdas.size());
  for (std::size_t l = 0; l < cfg.lambdas.size(); ++l) {
    if (cfg.loss == LossKind::square)
      square[l].emplace(A, SquareLoss(cfg.gamma, data.labels), cfg.lambdas[l]);
    else
      hinge[l].emplace(A, SmoothedHingeLoss(cfg.gamma), cfg.lambdas[l]);
  }

  std::vector<CellSummary> results(cells.size());
  detail::parallel_for(cells.size(), cfg.jobs, [&](std::size_t i) {
    const auto& c = cells[i];
    try {
      results[i] = cfg.loss == LossKind::square
                       ? detail::run_cell(*square[c.lambda_idx], cfg, ds, c.solver, c.seed)
                       : detail::run_cell(*hinge[c.lambda_idx], cfg, ds, c.solver, c.seed);
    } catch (const std::exception& e) {
      std::string msg = e.what();
      std::replace_if(msg.begin(), msg.end(), [](char ch) { return ch == ',' || ch == '\n'; }, ';');
      results[i] = CellSummary{ds, cfg.lambdas[c.lambda_idx], c.solver, c.seed, 0, NAN,
                               std::nullopt, {}, std::move(msg)};
    }
  });

  const auto path = (std::filesystem::path(cfg.out_dir) / "summary.csv").string();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot write '" + path + "'");
  f << "dataset,lambda,solver,seed,epochs_run,final_gap,epochs_to_tolerance,file,error\n";
  for (const auto& r : results) {
    f << r.dataset << ',' << format_double(r.lambda) << ',' << solver_name(r.solver) << ','
      << r.seed << ',' << r.epochs_run << ',' << format_double(r.final_gap) << ','
      << (r.epochs_to_tolerance ? std::to_string(*r.epochs_to_tolerance) : std::string()) << ','
      << r.file << ',' << r.error << '\n';
  }
  if (!f) throw io_error("write failure on '" + path + "'");
  return results;
}

}  // namespace apcg
