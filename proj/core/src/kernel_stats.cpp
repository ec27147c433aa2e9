#include "smallball/kernel_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "smallball/errors.hpp"

namespace smallball {

KernelSpec KernelSpec::uniform() {
  KernelSpec k;
  k.name = "uniform";
  k.k = [](double) { return 1.0; };
  k.k_prime = [](double) { return 0.0; };
  k.k_at_1 = 1.0;
  return k;
}

KernelSpec KernelSpec::truncated_linear(double a, double b) {
  if (std::abs(a + 0.5 * b - 1.0) > 1e-12)
    raise(errc::bad_parameter, "truncated-linear kernel must integrate to one: a + b/2 = 1");
  if (a < 0.0 || a + b < 0.0)
    raise(errc::bad_parameter, "truncated-linear kernel must be nonnegative on [0,1]");
  KernelSpec k;
  k.name = "truncated-linear";
  k.k = [a, b](double s) { return a + b * s; };
  k.k_prime = [b](double) { return b; };
  k.k_at_1 = a + b;
  return k;
}

KernelSpec KernelSpec::tabulated(std::vector<double> s, std::vector<double> kv) {
  if (s.size() != kv.size() || s.size() < 2)
    raise(errc::bad_parameter, "tabulated kernel needs matching grids of length >= 2");
  if (std::abs(s.front()) > 1e-12 || std::abs(s.back() - 1.0) > 1e-12)
    raise(errc::bad_parameter, "tabulated kernel grid must span [0,1]");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i] > s[i - 1])) raise(errc::bad_parameter, "tabulated kernel grid must increase");
  for (double v : kv)
    if (v < 0.0 || !std::isfinite(v))
      raise(errc::bad_parameter, "tabulated kernel values must be nonnegative");
  auto shared_s = std::make_shared<std::vector<double>>(std::move(s));
  auto shared_k = std::make_shared<std::vector<double>>(std::move(kv));
  auto segment = [shared_s](double x) {
    const auto& g = *shared_s;
    auto it = std::upper_bound(g.begin(), g.end(), x);
    std::size_t j = std::clamp<std::size_t>(static_cast<std::size_t>(it - g.begin()), 1,
                                            g.size() - 1);
    return j;
  };
  KernelSpec k;
  k.name = "tabulated";
  k.k = [shared_s, shared_k, segment](double x) {
    x = std::clamp(x, 0.0, 1.0);
    const std::size_t j = segment(x);
    const auto& g = *shared_s;
    const auto& v = *shared_k;
    const double t = (x - g[j - 1]) / (g[j] - g[j - 1]);
    return v[j - 1] + t * (v[j] - v[j - 1]);
  };
  k.k_prime = [shared_s, shared_k, segment](double x) {
    x = std::clamp(x, 0.0, 1.0);
    const std::size_t j = segment(x);
    const auto& g = *shared_s;
    const auto& v = *shared_k;
    return (v[j] - v[j - 1]) / (g[j] - g[j - 1]);
  };
  k.k_at_1 = shared_k->back();
  const double mass = integrate_adaptive(k.k, 0.0, 1.0, 1e-12, 1e-13, 20000).value;
  if (std::abs(mass - 1.0) > 1e-8)
    raise(errc::bad_parameter,
          "tabulated kernel integrates to " + std::to_string(mass) + ", not 1");
  return k;
}

bool validate_kernel(const KernelSpec& k, double quad_tol) {
  if (!k.k || !k.k_prime) raise(errc::bad_parameter, "kernel evaluators are not set");
  const double mass = integrate_adaptive(k.k, 0.0, 1.0, quad_tol * 0.1, 0.0, 20000).value;
  if (std::abs(mass - 1.0) > quad_tol)
    raise(errc::bad_parameter, "kernel mass " + std::to_string(mass) + " differs from 1");
  for (int i = 0; i <= 64; ++i) {
    const double s = static_cast<double>(i) / 64.0;
    if (k.k(s) < -1e-12) raise(errc::bad_parameter, "kernel is negative on [0,1]");
  }
  return k.k_at_1 == 0.0;
}

KernelExpectation kernel_expectation(const LogF& log_f, const KernelSpec& kernel, double h,
                                     double quad_tol) {
  if (!(h > 0.0) || !std::isfinite(h)) raise(errc::domain_error, "bandwidth h must be positive");
  const double log_fh = log_f(h);
  if (std::isnan(log_fh)) raise(errc::quadrature_failure, "log F undefined at h");
  auto integrand = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double d = log_f(h * s) - log_fh;
    const double ratio = d < -745.0 ? 0.0 : std::exp(d);  // Gamma-class flatness underflows
    return kernel.k_prime(s) * ratio;
  };
  QuadratureResult q = integrate_adaptive(integrand, 0.0, 1.0, quad_tol, quad_tol, 20000);
  const double bracket = kernel.k_at_1 - q.value;
  KernelExpectation out;
  out.value = std::exp(log_fh) * bracket;
  out.log_value = bracket > 0.0 ? log_fh + std::log(bracket)
                                : -std::numeric_limits<double>::infinity();
  out.ratio_to_k1f = kernel.k_at_1 > 0.0 ? bracket / kernel.k_at_1
                                         : std::numeric_limits<double>::infinity();
  return out;
}

double regular_variation_limit(const KernelSpec& kernel, double d, double quad_tol) {
  if (!(d >= 0.0)) raise(errc::domain_error, "regular variation index d must be >= 0");
  auto integrand = [&](double s) {
    if (s <= 0.0) return d == 0.0 ? kernel.k_prime(0.0) : 0.0;
    return std::pow(s, d) * kernel.k_prime(s);
  };
  QuadratureResult q = integrate_adaptive(integrand, 0.0, 1.0, quad_tol, quad_tol, 20000);
  return kernel.k_at_1 - q.value;
}

}  // namespace smallball
