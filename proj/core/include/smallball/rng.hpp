#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace smallball {

/// Philox 4x32-10 counter-based generator (Salmon et al., SC 2011).
/// Stateless block function: output depends only on (counter, key), so any
/// partitioning of samples across workers reproduces the single-worker stream.
struct Philox4x32 {
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }
};

/// Per-sample uniform stream: counter = (block index, stream tag, sample lo, sample hi),
/// key = seed. Each sample owns a disjoint counter subspace of 2^32 blocks.
class SampleRng {
 public:
  SampleRng(std::uint64_t seed, std::uint64_t sample_index, std::uint32_t stream_tag)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        base_{0u, stream_tag, static_cast<std::uint32_t>(sample_index),
              static_cast<std::uint32_t>(sample_index >> 32)} {}

  /// Four fresh 32-bit words.
  std::array<std::uint32_t, 4> next_block() {
    auto ctr = base_;
    ctr[0] = block_index_++;
    return Philox4x32::block(ctr, key_);
  }

  /// Two uniforms in (0,1), one block consumed; 32-bit resolution.
  std::pair<double, double> next_uniform_pair() {
    const auto w = next_block();
    return {u32_to_unit(w[0]), u32_to_unit(w[1])};
  }

  /// Four uniforms in (0,1) from one block.
  std::array<double, 4> next_uniform_quad() {
    const auto w = next_block();
    return {u32_to_unit(w[0]), u32_to_unit(w[1]), u32_to_unit(w[2]), u32_to_unit(w[3])};
  }

  /// One uniform with full 53-bit resolution (one block per call).
  double next_u53() {
    const auto w = next_block();
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(w[0]) << 32 | w[1]) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  static double u32_to_unit(std::uint32_t x) {
    return (static_cast<double>(x) + 0.5) * 0x1.0p-32;
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> base_;
  std::uint32_t block_index_ = 0;
};

}  // namespace smallball
