#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "apcg/core/errors.hpp"
#include "apcg/data/libsvm.hpp"
#include "apcg/data/sparse.hpp"

namespace apcg {

struct SyntheticSpec {
  std::size_t n = 1000;      // examples (columns)
  std::size_t d = 100;       // features (rows)
  double sparsity = 1.0;     // probability that an entry is stored
  double feature_decay = 0;  // row r is scaled by (r + 1)^-decay; larger is worse conditioned
  bool normalize = true;     // scale nonzero columns to unit norm
  double label_noise = 0.1;  // std of Gaussian noise added to the planted margin
  std::uint64_t seed = 0;
};

/// Sparse Gaussian examples with labels from a planted hyperplane. Columns
/// that draw no entries stay empty.
inline LabeledData synth_binary(const SyntheticSpec& spec) {
  if (!(spec.sparsity > 0.0 && spec.sparsity <= 1.0))
    throw input_error("synth_binary: sparsity must lie in (0, 1]");
  if (!(spec.label_noise >= 0.0)) throw input_error("synth_binary: label_noise must be >= 0");
  std::mt19937_64 gen(spec.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;

  std::vector<double> scale(spec.d), w_star(spec.d);
  for (std::size_t r = 0; r < spec.d; ++r) {
    scale[r] = std::pow(double(r + 1), -spec.feature_decay);
    w_star[r] = normal(gen);
  }

  SparseColMatrix::Builder b(spec.d);
  Vector labels(spec.n);
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  for (std::size_t i = 0; i < spec.n; ++i) {
    idx.clear();
    val.clear();
    for (std::size_t r = 0; r < spec.d; ++r) {
      if (spec.sparsity < 1.0 && unif(gen) >= spec.sparsity) continue;
      const double v = normal(gen) * scale[r];
      if (v == 0.0) continue;
      idx.push_back(static_cast<std::uint32_t>(r));
      val.push_back(v);
    }
    double nrm = 0.0, margin = 0.0;
    for (std::size_t p = 0; p < val.size(); ++p) {
      nrm += val[p] * val[p];
      margin += val[p] * w_star[idx[p]];
    }
    nrm = std::sqrt(nrm);
    if (spec.normalize && nrm > 0.0) {
      for (double& v : val) v /= nrm;
      margin /= nrm;
    }
    margin += spec.label_noise * normal(gen);
    labels[i] = margin >= 0.0 ? 1.0 : -1.0;
    b.add_column(idx, val);
  }
  return {std::move(b).build(), std::move(labels)};
}

struct DatasetMeta {
  std::string name;
  std::size_t n = 0, d = 0, nnz = 0;
  double sparsity = 0.0;  // nnz / (n d)
};

inline DatasetMeta describe(std::string name, const SparseColMatrix& A) {
  DatasetMeta m{std::move(name), A.cols(), A.rows(), A.nnz(), 0.0};
  if (m.n > 0 && m.d > 0) m.sparsity = double(m.nnz) / (double(m.n) * double(m.d));
  return m;
}

}  // namespace apcg
