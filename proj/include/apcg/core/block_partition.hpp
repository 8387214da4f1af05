#pragma once

#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "apcg/core/errors.hpp"

namespace apcg {

/// Partition of the N coordinates of a vector into n contiguous blocks.
///
/// Block i occupies [offset(i), offset(i) + size(i)). The selector matrices
/// U_i are never formed; `block()` returns the corresponding sub-span.
class BlockPartition {
 public:
  BlockPartition() = default;

  explicit BlockPartition(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
    offsets_.resize(sizes_.size() + 1, 0);
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
      if (sizes_[i] == 0) throw input_error("block sizes must be >= 1");
      offsets_[i + 1] = offsets_[i] + sizes_[i];
    }
  }

  /// n blocks of one coordinate each.
  static BlockPartition scalar(std::size_t n) {
    return BlockPartition(std::vector<std::size_t>(n, 1));
  }

  /// n blocks of equal size.
  static BlockPartition uniform(std::size_t n, std::size_t block_size) {
    return BlockPartition(std::vector<std::size_t>(n, block_size));
  }

  std::size_t num_blocks() const noexcept { return sizes_.size(); }
  std::size_t dimension() const noexcept { return offsets_.empty() ? 0 : offsets_.back(); }
  std::size_t size(std::size_t i) const { return sizes_[i]; }
  std::size_t offset(std::size_t i) const { return offsets_[i]; }
  std::size_t max_block_size() const {
    std::size_t m = 0;
    for (auto s : sizes_) m = std::max(m, s);
    return m;
  }
  bool all_scalar() const noexcept { return dimension() == num_blocks(); }

  template <class T>
  std::span<T> block(std::span<T> x, std::size_t i) const {
    return x.subspan(offsets_[i], sizes_[i]);
  }
  std::span<double> block(std::vector<double>& x, std::size_t i) const {
    return block(std::span<double>(x), i);
  }
  std::span<const double> block(const std::vector<double>& x, std::size_t i) const {
    return block(std::span<const double>(x), i);
  }

  void check_dimension(std::size_t len, const char* what) const {
    if (len != dimension())
      throw input_error(std::string(what) + ": expected dimension " +
                        std::to_string(dimension()) + ", got " + std::to_string(len));
  }

  const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
  const std::vector<std::size_t>& offsets() const noexcept { return offsets_; }

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_{0};
};

}  // namespace apcg
