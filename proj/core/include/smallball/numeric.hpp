#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace smallball {

/// Closed interval [lo, hi]; hi may be +inf when only a one-sided bound is known.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Function given in log space: eval(s) returns log F(s), -inf meaning F(s) = 0.
using LogF = std::function<double(double)>;

/// Compensated (Neumaier) summation.
class NeumaierSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
struct GaussLegendre {
  std::vector<double> node;
  std::vector<double> weight;
};
const GaussLegendre& gauss_legendre(int order);

/// Fixed-order Gauss-Legendre quadrature over [a, b].
double integrate_gl(const std::function<double(double)>& f, double a, double b, int order = 32);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  std::size_t evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod 15(7) quadrature on [a, b].
/// Stops when the error estimate is below max(abs_tol, rel_tol*|value|).
/// Throws errc::quadrature_failure on NaN integrand values or interval exhaustion.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, double abs_tol = 0.0,
                                    std::size_t max_intervals = 4000);

/// Integral of a nonnegative decreasing f over [a, inf) by dyadic windows.
/// upper_remainder(b) must be a rigorous upper bound for the integral of f over [b, inf).
/// Result: value with |truth - value| <= slack.
struct TailIntegral {
  double value = 0.0;
  double slack = 0.0;
};
TailIntegral integrate_dyadic_to_inf(const std::function<double(double)>& f, double a,
                                     const std::function<double(double)>& upper_remainder,
                                     double stop_rel = 1e-17, int max_windows = 700);

struct RootResult {
  double x = 0.0;
  double f = 0.0;
  int iterations = 0;
};

/// Root of a continuous strictly monotone f on a bracket [lo, hi] with f(lo), f(hi) of
/// opposite sign. Hybrid secant/bisection; stops when |f| <= f_tol or the bracket
/// shrinks below x_tol (absolute + relative). Throws errc::no_convergence at max_iter.
RootResult find_root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                               double f_lo, double f_hi, double f_tol, double x_rel_tol = 1e-14,
                               int max_iter = 200);

/// Ordinary least squares for a small column count (n <= 6) via normal equations.
/// Returns coefficients; rms_residual receives the root-mean-square residual.
std::vector<double> least_squares(const std::vector<std::vector<double>>& rows,
                                  const std::vector<double>& y, double* rms_residual = nullptr);

}  // namespace smallball
