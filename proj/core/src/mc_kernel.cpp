// Hot Monte Carlo loop. Compiled with fast-math flags (see CMakeLists) so the
// chunked log/cos passes vectorize; results stay bit-reproducible for a fixed
// build because the instruction schedule is fixed at compile time.

#include "mc_kernel.hpp"

#include <algorithm>
#include <cmath>

#include "smallball/numeric.hpp"
#include "smallball/rng.hpp"

namespace smallball::detail {

namespace {
constexpr double kFourPi = 12.566370614359172954;
constexpr std::uint32_t kMcStreamTag = 1u;
constexpr std::size_t kChunk = 512;
}  // namespace

void mc_run_block(std::span<const double> pair_avg, std::span<const double> pair_dif,
                  double odd_coeff, std::span<const double> thresholds, double theta,
                  double reference_epsilon, std::uint64_t seed, std::size_t first,
                  std::size_t last, McBlockSums& out) {
  const std::size_t n_pairs = pair_avg.size();
  const std::size_t k = thresholds.size();
  std::vector<double> b1(k + 1, 0.0), b2(k + 1, 0.0);
  alignas(64) double lg[kChunk], cs[kChunk], u1[kChunk], u2[kChunk];
  for (std::size_t j = first; j < last; ++j) {
    SampleRng rng(seed, j, kMcStreamTag);
    double acc = 0.0;
    std::size_t p = 0;
    while (p < n_pairs) {
      const std::size_t c = std::min(kChunk, n_pairs - p);
      for (std::size_t q = 0; q + 1 < c; q += 2) {
        const auto w = rng.next_block();
        u1[q] = SampleRng::u32_to_unit(w[0]);
        u2[q] = SampleRng::u32_to_unit(w[1]);
        u1[q + 1] = SampleRng::u32_to_unit(w[2]);
        u2[q + 1] = SampleRng::u32_to_unit(w[3]);
      }
      if (c & 1u) {
        const auto w = rng.next_block();
        u1[c - 1] = SampleRng::u32_to_unit(w[0]);
        u2[c - 1] = SampleRng::u32_to_unit(w[1]);
      }
      for (std::size_t q = 0; q < c; ++q) lg[q] = std::log(u1[q]);
      for (std::size_t q = 0; q < c; ++q) cs[q] = std::cos(kFourPi * u2[q]);
      double part = 0.0;
      for (std::size_t q = 0; q < c; ++q)
        part += lg[q] * (pair_avg[p + q] + pair_dif[p + q] * cs[q]);
      acc += part;
      p += c;
    }
    double z = -2.0 * acc;
    if (odd_coeff > 0.0) {
      const auto [u, v] = rng.next_uniform_pair();
      z += odd_coeff * (-std::log(u)) * (1.0 + std::cos(kFourPi * v));
    }
    // bucket by the first threshold strictly above z
    const std::size_t idx =
        std::upper_bound(thresholds.begin(), thresholds.end(), z) - thresholds.begin();
    const double w = (theta > 0.0) ? std::exp(theta * (z - reference_epsilon)) : 1.0;
    b1[idx] += w;
    b2[idx] += w * w;
  }
  // indicator z < t_k accumulates buckets with index <= k
  NeumaierSum a1, a2;
  out.s1.assign(k, 0.0);
  out.s2.assign(k, 0.0);
  for (std::size_t kk = 0; kk < k; ++kk) {
    a1.add(b1[kk]);
    a2.add(b2[kk]);
    out.s1[kk] = a1.value();
    out.s2[kk] = a2.value();
  }
}

}  // namespace smallball::detail
