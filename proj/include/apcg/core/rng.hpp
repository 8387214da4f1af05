#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace apcg {

/// Seedable uniform block sampler.
///
/// std::uniform_int_distribution is implementation-defined, so the bounded
/// draw is done here by rejection to keep sequences identical across
/// standard libraries.
class BlockSampler {
 public:
  explicit BlockSampler(std::uint64_t seed = 0) : engine_(seed) {}

  std::size_t operator()(std::size_t n) {
    const std::uint64_t range = static_cast<std::uint64_t>(n);
    // largest multiple of range not exceeding 2^64
    const std::uint64_t limit = -range % range;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r < limit);
    return static_cast<std::size_t>(r % range);
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace apcg
