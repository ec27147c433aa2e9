#pragma once

#include <functional>
#include <string>
#include <vector>

#include "smallball/numeric.hpp"

namespace smallball {

/// Kernel on [0,1] with unit mass and an integrable derivative.
struct KernelSpec {
  std::function<double(double)> k;
  std::function<double(double)> k_prime;
  double k_at_1 = 0.0;
  std::string name;

  /// K == 1 on [0,1].
  static KernelSpec uniform();
  /// K(s) = a + b s; requires a + b/2 = 1 and K >= 0 on [0,1].
  static KernelSpec truncated_linear(double a, double b);
  /// piecewise-linear interpolation through (s_j, k_j) on an increasing grid
  /// spanning [0,1]; the derivative is the segment slope.
  static KernelSpec tabulated(std::vector<double> s, std::vector<double> k);
};

/// Checks unit mass (quadrature, tolerance quad_tol) and nonnegativity on a grid.
/// Returns true when K(1) = 0, which is accepted but worth a caller-side warning.
bool validate_kernel(const KernelSpec& k, double quad_tol = 1e-8);

struct KernelExpectation {
  double value = 0.0;         // F(h) K(1) - int_0^1 K'(s) F(hs) ds
  double log_value = 0.0;
  double ratio_to_k1f = 0.0;  // value / (K(1) F(h)); +inf when K(1) = 0
};

/// Smoothed-indicator expectation from a CDF given in log space. F values under h
/// enter the quadrature as exp(log F(hs) - log F(h)), underflowing to zero.
KernelExpectation kernel_expectation(const LogF& log_f, const KernelSpec& kernel, double h,
                                     double quad_tol = 1e-9);

/// K(1) - int_0^1 s^d K'(s) ds: the limiting constant of the regularly varying
/// regime F(h) = C h^d.
double regular_variation_limit(const KernelSpec& kernel, double d, double quad_tol = 1e-10);

}  // namespace smallball
