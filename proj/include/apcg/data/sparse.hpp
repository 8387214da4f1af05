#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "apcg/core/errors.hpp"
#include "apcg/core/vector_ops.hpp"

namespace apcg {

/// Compressed sparse column matrix, d rows by n columns. Column i is example
/// A_i. Row indices are strictly increasing within a column and stored values
/// are finite and nonzero.
class SparseColMatrix {
 public:
  SparseColMatrix() : col_ptr_{0} {}

  SparseColMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> col_ptr,
                  std::vector<std::uint32_t> row_idx, std::vector<double> values)
      : rows_(rows),
        cols_(cols),
        col_ptr_(std::move(col_ptr)),
        row_idx_(std::move(row_idx)),
        values_(std::move(values)) {
    validate();
  }

  /// Column-at-a-time construction.
  class Builder {
   public:
    explicit Builder(std::size_t rows) : rows_(rows) { col_ptr_.push_back(0); }

    void add_column(std::span<const std::uint32_t> idx, std::span<const double> val) {
      if (idx.size() != val.size()) throw input_error("SparseColMatrix: index/value size mismatch");
      row_idx_.insert(row_idx_.end(), idx.begin(), idx.end());
      values_.insert(values_.end(), val.begin(), val.end());
      col_ptr_.push_back(row_idx_.size());
    }

    void set_rows(std::size_t rows) { rows_ = rows; }

    SparseColMatrix build() && {
      const std::size_t cols = col_ptr_.size() - 1;
      return SparseColMatrix(rows_, cols, std::move(col_ptr_), std::move(row_idx_),
                             std::move(values_));
    }

   private:
    std::size_t rows_;
    std::vector<std::size_t> col_ptr_;
    std::vector<std::uint32_t> row_idx_;
    std::vector<double> values_;
  };

  static SparseColMatrix from_dense(const Eigen::MatrixXd& M) {
    Builder b(static_cast<std::size_t>(M.rows()));
    std::vector<std::uint32_t> idx;
    std::vector<double> val;
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      idx.clear();
      val.clear();
      for (Eigen::Index r = 0; r < M.rows(); ++r)
        if (M(r, j) != 0.0) {
          idx.push_back(static_cast<std::uint32_t>(r));
          val.push_back(M(r, j));
        }
      b.add_column(idx, val);
    }
    return std::move(b).build();
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::uint32_t> col_indices(std::size_t i) const {
    return {row_idx_.data() + col_ptr_[i], col_ptr_[i + 1] - col_ptr_[i]};
  }
  std::span<const double> col_values(std::size_t i) const {
    return {values_.data() + col_ptr_[i], col_ptr_[i + 1] - col_ptr_[i]};
  }

  /// A_i' w
  double col_dot(std::size_t i, std::span<const double> w) const {
    double s = 0.0;
    for (std::size_t p = col_ptr_[i]; p < col_ptr_[i + 1]; ++p) s += values_[p] * w[row_idx_[p]];
    return s;
  }

  /// w += a * A_i
  void axpy_col(std::size_t i, double a, std::span<double> w) const {
    for (std::size_t p = col_ptr_[i]; p < col_ptr_[i + 1]; ++p) w[row_idx_[p]] += a * values_[p];
  }

  double col_sq_norm(std::size_t i) const {
    double s = 0.0;
    for (std::size_t p = col_ptr_[i]; p < col_ptr_[i + 1]; ++p) s += values_[p] * values_[p];
    return s;
  }

  /// out = A x, with x of length n and out of length d.
  void multiply(std::span<const double> x, std::span<double> out) const {
    if (x.size() != cols_ || out.size() != rows_) throw input_error("multiply: dimension mismatch");
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < cols_; ++i)
      if (x[i] != 0.0) axpy_col(i, x[i], out);
  }

  /// out_i = A_i' w, with w of length d and out of length n.
  void multiply_transpose(std::span<const double> w, std::span<double> out) const {
    if (w.size() != rows_ || out.size() != cols_)
      throw input_error("multiply_transpose: dimension mismatch");
    for (std::size_t i = 0; i < cols_; ++i) out[i] = col_dot(i, w);
  }

  /// Column i scaled by s[i]; zero scales drop the column's entries.
  SparseColMatrix scale_columns(std::span<const double> s) const {
    if (s.size() != cols_) throw input_error("scale_columns: one factor per column required");
    Builder b(rows_);
    std::vector<std::uint32_t> idx;
    std::vector<double> val;
    for (std::size_t i = 0; i < cols_; ++i) {
      idx.clear();
      val.clear();
      if (s[i] != 0.0) {
        for (std::size_t p = col_ptr_[i]; p < col_ptr_[i + 1]; ++p) {
          idx.push_back(row_idx_[p]);
          val.push_back(values_[p] * s[i]);
        }
      }
      b.add_column(idx, val);
    }
    return std::move(b).build();
  }

  Eigen::MatrixXd to_dense() const {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_),
                                              static_cast<Eigen::Index>(cols_));
    for (std::size_t i = 0; i < cols_; ++i)
      for (std::size_t p = col_ptr_[i]; p < col_ptr_[i + 1]; ++p)
        M(row_idx_[p], static_cast<Eigen::Index>(i)) = values_[p];
    return M;
  }

  friend bool operator==(const SparseColMatrix&, const SparseColMatrix&) = default;

 private:
  void validate() const {
    if (col_ptr_.size() != cols_ + 1 || col_ptr_.front() != 0 || col_ptr_.back() != values_.size() ||
        row_idx_.size() != values_.size())
      throw input_error("SparseColMatrix: inconsistent column pointers");
    for (std::size_t i = 0; i < cols_; ++i) {
      if (col_ptr_[i + 1] < col_ptr_[i]) throw input_error("SparseColMatrix: decreasing column pointers");
      for (std::size_t p = col_ptr_[i]; p < col_ptr_[i + 1]; ++p) {
        if (row_idx_[p] >= rows_) throw input_error("SparseColMatrix: row index out of range");
        if (p > col_ptr_[i] && row_idx_[p] <= row_idx_[p - 1])
          throw input_error("SparseColMatrix: row indices must be strictly increasing");
        if (!std::isfinite(values_[p]) || values_[p] == 0.0)
          throw input_error("SparseColMatrix: stored values must be finite and nonzero");
      }
    }
  }

  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::size_t> col_ptr_;
  std::vector<std::uint32_t> row_idx_;
  std::vector<double> values_;
};

}  // namespace apcg
