// Solves a small lasso-type problem 1/2 x'Qx - b'x + 0.1 ||x||_1 with the
// efficient APCG variant and prints the objective once per epoch.

#include <cstdio>

#include "apcg/core/regularizers.hpp"
#include "apcg/problems/quadratic.hpp"
#include "apcg/solver/solve.hpp"

int main() {
  const std::size_t n = 50;
  auto f = apcg::random_diagonally_dominant_quadratic(n, 7, 0.9);
  apcg::L1Regularizer psi(0.1);
  apcg::CompositeProblem problem(f, psi);

  apcg::SolveOptions opt;
  opt.variant = apcg::Variant::efficient;
  opt.max_iters = 40 * n;
  opt.seed = 1;
  const auto res = apcg::solve(problem, apcg::Vector(n, 0.0), opt);

  std::printf("mu = %.4g, %zu blocks\n", f.mu(), n);
  for (const auto& t : res.trace)
    std::printf("epoch %3zu  F = %.12f\n", t.iteration / n, t.objective);
  std::size_t nonzero = 0;
  for (double v : res.x) nonzero += v != 0.0;
  std::printf("nonzeros in solution: %zu of %zu\n", nonzero, n);
}
