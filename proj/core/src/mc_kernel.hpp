#pragma once

// Internal Monte Carlo kernel: one block of samples of the truncated quadratic
// form, evaluated against a sorted threshold grid. Lives in its own translation
// unit so the log/cos inner loops can be compiled with vector-math flags.

#include <cstdint>
#include <span>
#include <vector>

namespace smallball::detail {

struct McBlockSums {
  std::vector<double> s1;  // per threshold: sum of weights with z < t_k
  std::vector<double> s2;  // per threshold: sum of squared weights
};

void mc_run_block(std::span<const double> pair_avg, std::span<const double> pair_dif,
                  double odd_coeff, std::span<const double> thresholds, double theta,
                  double reference_epsilon, std::uint64_t seed, std::size_t first,
                  std::size_t last, McBlockSums& out);

}  // namespace smallball::detail
