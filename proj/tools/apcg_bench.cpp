// apcg_bench: run dual ERM solvers on LIBSVM or synthetic data and write
// per-epoch CSV traces, or run the desk-scale invariant checks.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "apcg/bench/checks.hpp"
#include "apcg/bench/experiment.hpp"

namespace {

enum exit_code { ok = 0, failed = 1, bad_config = 2, bad_input = 3 };

apcg::SyntheticSpec parse_synthetic(const std::string& text) {
  apcg::SyntheticSpec s;
  std::istringstream in(text);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(in, part, ',')) parts.push_back(part);
  if (parts.size() != 3) throw apcg::config_error("--synthetic expects n,d,sparsity");
  try {
    std::size_t used = 0;
    const long long n = std::stoll(parts[0], &used);
    if (used != parts[0].size() || n <= 0) throw std::invalid_argument("n");
    const long long d = std::stoll(parts[1], &used);
    if (used != parts[1].size() || d <= 0) throw std::invalid_argument("d");
    s.sparsity = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("sparsity");
    s.n = static_cast<std::size_t>(n);
    s.d = static_cast<std::size_t>(d);
  } catch (const std::logic_error&) {
    throw apcg::config_error("--synthetic expects n,d,sparsity, got '" + text + "'");
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accelerated proximal coordinate gradient benchmarks"};
  app.set_config("--config", "", "Read options from a TOML/INI file (command-line flags win)");
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run solvers and write CSV traces");
  std::string data_path, synthetic, loss = "smoothed_hinge", out_dir = "results";
  std::vector<double> lambdas;
  std::vector<std::string> solvers;
  std::vector<std::uint64_t> seeds;
  double gamma = 1.0, decay = 0.0, noise = 0.1, tol = 0.0;
  std::size_t epochs = 100, jobs = apcg::default_jobs();
  std::uint64_t data_seed = 0;
  double afg_step = 0.0, afg_backtrack = 0.5;
  auto* data_opt = run->add_option("--data", data_path, "LIBSVM file (.gz accepted)");
  auto* synth_opt = run->add_option("--synthetic", synthetic, "Synthetic data as n,d,sparsity");
  data_opt->excludes(synth_opt);
  run->add_option("--decay", decay, "Synthetic feature decay (condition knob)");
  run->add_option("--noise", noise, "Synthetic label noise");
  run->add_option("--data-seed", data_seed, "Synthetic data seed");
  run->add_option("--loss", loss, "smoothed_hinge or square");
  run->add_option("--lambda", lambdas, "Regularization (repeatable)")->required();
  run->add_option("--gamma", gamma, "Loss smoothness");
  run->add_option("--solver", solvers, "apcg, sdca, afg or rpcg (repeatable)");
  run->add_option("--seed", seeds, "Sampling seed (repeatable)");
  run->add_option("--epochs", epochs, "Passes through the data");
  run->add_option("--tol", tol, "Gap tolerance for the summary");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--jobs", jobs, "Parallel runs (default $APCG_JOBS or 1)");
  run->add_option("--afg-step", afg_step, "AFG initial step (default 1/max L_i)");
  run->add_option("--afg-backtrack", afg_backtrack, "AFG backtracking factor in (0,1)");

  // check
  auto* check = app.add_subcommand("check", "Run the invariant checks");
  apcg::CheckConfig cc;
  check->add_option("--lasso-n", cc.lasso_n, "Blocks of the lasso-type instance (<= 1000)");
  check->add_option("--erm-n", cc.erm_n, "Examples of the ERM instance (<= 1000)");
  check->add_option("--erm-d", cc.erm_d, "Features of the ERM instance");
  check->add_option("--seeds", cc.seeds, "Seeds in the rate envelope average");
  check->add_option("--epochs", cc.epochs, "Epochs for the envelope and duality checks");
  check->add_option("--seed", cc.seed, "Base seed");
  check->add_option("--corrupt-alpha", cc.corrupt_alpha, "Scale every alpha root (test hook)")
      ->group("");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) {
      const auto results = apcg::check_invariants(cc);
      bool all = true;
      for (const auto& r : results) {
        std::printf("%s %-24s worst=%.3e threshold=%.3e\n", r.passed ? "PASS" : "FAIL",
                    r.name.c_str(), r.worst, r.threshold);
        all = all && r.passed;
      }
      return all ? ok : failed;
    }

    apcg::ExperimentConfig cfg;
    if (*data_opt)
      cfg.data = data_path;
    else if (*synth_opt) {
      auto s = parse_synthetic(synthetic);
      s.feature_decay = decay;
      s.label_noise = noise;
      s.seed = data_seed;
      cfg.data = s;
    } else {
      throw apcg::config_error("one of --data or --synthetic is required");
    }
    cfg.loss = apcg::parse_loss(loss);
    cfg.lambdas = lambdas;
    cfg.gamma = gamma;
    if (!solvers.empty()) {
      cfg.solvers.clear();
      for (const auto& s : solvers) cfg.solvers.push_back(apcg::parse_solver(s));
    }
    if (!seeds.empty()) cfg.seeds = seeds;
    cfg.epochs = epochs;
    if (run->count("--tol")) cfg.tolerance = tol;
    cfg.out_dir = out_dir;
    cfg.jobs = jobs;
    if (run->count("--afg-step")) cfg.afg.initial_step = afg_step;
    cfg.afg.backtrack = afg_backtrack;

    const auto cells = apcg::run_experiment(cfg);
    bool all = true;
    for (const auto& c : cells) {
      if (!c.error.empty()) {
        std::fprintf(stderr, "error: lambda=%g %s seed=%llu: %s\n", c.lambda,
                     std::string(apcg::solver_name(c.solver)).c_str(),
                     static_cast<unsigned long long>(c.seed), c.error.c_str());
        all = false;
        continue;
      }
      std::printf("lambda=%g %-5s seed=%llu epochs=%zu gap=%.3e", c.lambda,
                  std::string(apcg::solver_name(c.solver)).c_str(),
                  static_cast<unsigned long long>(c.seed), c.epochs_run, c.final_gap);
      if (cfg.tolerance)
        std::printf(" to_tol=%s",
                    c.epochs_to_tolerance ? std::to_string(*c.epochs_to_tolerance).c_str() : "-");
      std::printf("\n");
    }
    return all ? ok : failed;
  } catch (const apcg::config_error& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return bad_config;
  } catch (const apcg::io_error& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return bad_input;
  } catch (const apcg::parse_error& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return bad_input;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return failed;
  }
}
