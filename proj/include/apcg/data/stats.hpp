#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "apcg/core/vector_ops.hpp"
#include "apcg/data/sparse.hpp"

namespace apcg {

/// Largest singular value by power iteration on A'A (or AA', whichever is
/// smaller), from a seeded random start. Stops when the Rayleigh quotient
/// changes by less than rel_tol relative.
inline double spectral_norm(const SparseColMatrix& A, double rel_tol = 1e-12,
                            int max_iter = 100000, std::uint64_t seed = 12345) {
  const std::size_t n = A.cols(), d = A.rows();
  if (n == 0 || d == 0 || A.nnz() == 0) return 0.0;
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  const bool on_cols = n <= d;
  Vector v(on_cols ? n : d), t(on_cols ? d : n);
  for (double& e : v) e = normal(gen);
  double nv = norm2(v);
  for (double& e : v) e /= nv;
  double sigma2 = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    if (on_cols) {
      A.multiply(v, t);
      A.multiply_transpose(t, v);
    } else {
      A.multiply_transpose(v, t);
      A.multiply(t, v);
    }
    nv = norm2(v);  // ||M v|| with ||v|| = 1 converges to sigma^2 from below
    if (nv == 0.0) return 0.0;
    for (double& e : v) e /= nv;
    const bool done = std::abs(nv - sigma2) <= rel_tol * nv;
    sigma2 = nv;
    if (done) break;
  }
  return std::sqrt(sigma2);
}

struct ColumnStats {
  double max_col_norm = 0.0;  // R
  double frobenius = 0.0;
  double spectral = 0.0;
};

inline ColumnStats column_stats(const SparseColMatrix& A, double rel_tol = 1e-12) {
  ColumnStats s;
  double fro2 = 0.0;
  for (std::size_t i = 0; i < A.cols(); ++i) {
    const double c = A.col_sq_norm(i);
    fro2 += c;
    s.max_col_norm = std::max(s.max_col_norm, std::sqrt(c));
  }
  s.frobenius = std::sqrt(fro2);
  s.spectral = spectral_norm(A, rel_tol);
  return s;
}

}  // namespace apcg
