#pragma once

#include <cstddef>

#include "smallball/spectrum.hpp"

namespace smallball {

/// Value of an infinite series with a certified truncation remainder:
/// |value - truth| <= tail_error, and on success
/// tail_error <= policy.tail_tolerance * max(1, |value|).
struct SeriesValue {
  double value = 0.0;
  double tail_error = 0.0;
  std::size_t terms_used = 0;
};

/// mu(theta) = sum_i 1/(a_i^2 + 2 theta); strictly decreasing in theta.
SeriesValue eval_mu(const EigenSpectrum& s, double theta, const TruncationPolicy& policy = {});

/// psi(theta) = sqrt(sum_i 2 theta^2/(a_i^2 + 2 theta)^2); increasing, psi(0) = 0.
SeriesValue eval_psi(const EigenSpectrum& s, double theta, const TruncationPolicy& policy = {});

/// I(theta) = 1/2 sum_i log(1 + 2 theta/a_i^2) - theta mu(theta); nonnegative, nondecreasing.
SeriesValue eval_I(const EigenSpectrum& s, double theta, const TruncationPolicy& policy = {});

/// mu'(theta) = -2 sum_i 1/(a_i^2 + 2 theta)^2.
SeriesValue eval_mu_prime(const EigenSpectrum& s, double theta,
                          const TruncationPolicy& policy = {});

/// psi'(theta)/psi(theta) = (1/theta) [sum a_i^2/(a_i^2+2theta)^3] / [sum 1/(a_i^2+2theta)^2];
/// requires theta > 0.
SeriesValue eval_log_psi_prime(const EigenSpectrum& s, double theta,
                               const TruncationPolicy& policy = {});

/// N(theta) = sup{ i : a_i^2 <= theta }. For explicit spectra the count saturates at
/// the list length once theta reaches the last stored eigenvalue.
std::size_t count_N(const EigenSpectrum& s, double theta);

}  // namespace smallball
