#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "smallball/numeric.hpp"
#include "smallball/spectrum.hpp"

namespace smallball {

/// Ground-truth estimate of P(z_N < epsilon) for the N-term truncation
/// z_N = sum_{i<=N} x_i^2 / a_i^2 of the squared norm.
struct OracleEstimate {
  enum class Method { mc_plain, mc_tilted, cf_inversion };

  double epsilon = 0.0;
  double estimate = 0.0;
  double log_estimate = 0.0;  // finite even when estimate underflows
  double std_error = 0.0;     // 0 for cf_inversion
  Interval bracket{0.0, 1.0};  // contains P(z < epsilon) when filled by truncation_bracket
  Method method = Method::mc_plain;
  std::size_t terms = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

const char* method_name(OracleEstimate::Method m) noexcept;

/// Plain Monte Carlo estimate of P(z_N < epsilon). Deterministic in
/// (seed, samples, terms); the worker count never changes the result.
OracleEstimate mc_plain_cdf(const EigenSpectrum& s, double epsilon, std::size_t terms,
                            std::size_t samples, std::uint64_t seed, unsigned threads = 0);

/// Exponentially tilted Monte Carlo: x_i drawn with variance a_i^2/(a_i^2+2 theta)
/// at the saddlepoint mu_N(theta) = epsilon, reweighted by the exact likelihood
/// ratio. Effective down to log-probabilities of order -10^3.
OracleEstimate mc_tilted_cdf(const EigenSpectrum& s, double epsilon, std::size_t terms,
                             std::size_t samples, std::uint64_t seed, unsigned threads = 0);

/// One Monte Carlo pass evaluated at several thresholds (shared samples).
/// Tilt (if any) is chosen for reference_epsilon.
struct McPoint {
  double epsilon = 0.0;
  double estimate = 0.0;
  double log_estimate = 0.0;
  double std_error = 0.0;
};
std::vector<McPoint> mc_cdf_multi(const EigenSpectrum& s, std::span<const double> thresholds,
                                  double reference_epsilon, std::size_t terms,
                                  std::size_t samples, std::uint64_t seed, bool tilted,
                                  unsigned threads = 0);

/// Deterministic CDF of z_N by numerical inversion of its characteristic function
/// (Gil-Pelaez/Imhof form). Refuses estimates below 1e-10 (UnderflowRegime):
/// oscillatory cancellation makes the output untrustworthy there.
OracleEstimate cf_inversion_cdf(const EigenSpectrum& s, double epsilon, std::size_t terms,
                                double quad_tol);

/// Point value with a one-sigma-style uncertainty, as consumed by truncation_bracket.
struct PointEstimate {
  double estimate = 0.0;
  double uncertainty = 0.0;
};

/// The delta probes at which truncation_bracket will query its inner CDF
/// (callers running Monte Carlo can prefetch all of them in one pass).
std::vector<double> bracket_delta_grid(double epsilon, double tail_mean_hi);

/// Interval guaranteed to contain P(z < epsilon) built from inner estimates of
/// P(z_N < .): upper = P(z_N < eps); lower optimizes P(z_N < eps-delta) minus a
/// Markov/Chernoff bound on P(tail >= delta). Inner uncertainties are widened 3x.
Interval truncation_bracket(const EigenSpectrum& s, double epsilon, std::size_t terms,
                            const std::function<PointEstimate(double)>& inner_cdf);

}  // namespace smallball
