#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "smallball/numeric.hpp"

namespace smallball {

/// Certificate for the behaviour of an explicit eigenvalue list beyond its last entry.
/// geometric(r): 1/a_i^2 <= (1/a_n^2) r^(i-n) for i > n (list length n).
/// power(p):     coeff_lo * i^-p <= 1/a_i^2 <= coeff_hi * i^-p for i > n.
struct TailModel {
  enum class Kind { none, geometric, power };
  Kind kind = Kind::none;
  double ratio = 0.0;     // geometric decay of 1/a_i^2
  double exponent = 0.0;  // power-law exponent p
  double coeff_lo = 0.0;  // lower envelope coefficient (0 = no lower bound)
  double coeff_hi = 0.0;  // upper envelope coefficient (0 = anchor at the list end)

  static TailModel none() { return {}; }
  static TailModel geometric(double ratio);
  static TailModel power(double exponent);
  static TailModel power_envelope(double exponent, double coeff_lo, double coeff_hi);
};

/// Stopping rule for infinite-series evaluation. The certified truncation error of
/// a successful evaluation is at most tail_tolerance * max(1, |value|).
struct TruncationPolicy {
  std::size_t max_terms = 10'000'000;
  double tail_tolerance = 1e-12;
};

/// The eigenvalue sequence (a_i), non-decreasing with sum 1/a_i^2 < inf.
/// Immutable after construction; safe to share across threads.
class EigenSpectrum {
 public:
  enum class Family { polynomial, exponential, explicit_list };

  /// a_i = i^(beta/2), beta > 1.
  static EigenSpectrum polynomial(double beta, std::string description = {});
  /// a_i = exp(alpha*i), alpha > 0.
  static EigenSpectrum exponential(double alpha, std::string description = {});
  /// Finite prefix of the sequence plus a tail certificate.
  static EigenSpectrum explicit_list(std::vector<double> values, TailModel tail,
                                     std::string description = {});

  Family family() const { return family_; }
  double beta() const { return beta_; }
  double alpha() const { return alpha_; }
  const std::vector<double>& values() const { return values_; }
  const TailModel& tail_model() const { return tail_; }
  const std::string& description() const { return description_; }

  /// Number of explicitly known entries; SIZE_MAX for the closed-form families.
  std::size_t list_size() const {
    return family_ == Family::explicit_list ? values_.size()
                                            : std::numeric_limits<std::size_t>::max();
  }

  /// a_i^2, 1-based; i must be within list_size() for explicit spectra.
  double a_squared(std::size_t i) const;
  double a(std::size_t i) const;

  /// Rigorous interval around sum_{i>n} 1/a_i^2. For explicit spectra with
  /// kind = none the upper endpoint is +inf when n < list length (partial bound)
  /// and NoTailModel is raised when n >= list length.
  Interval tail_sum_bounds(std::size_t n) const;

 private:
  EigenSpectrum() = default;
  Family family_ = Family::polynomial;
  double beta_ = 0.0;
  double alpha_ = 0.0;
  std::vector<double> values_;
  TailModel tail_;
  std::string description_;
};

/// Spectrum descriptor (de)serialization. The JSON shape is
///   {"family":"polynomial","beta":2.0}
///   {"family":"exponential","alpha":0.5}
///   {"family":"explicit","values":[...],"tail":{"kind":"power","exponent":2.0}}
EigenSpectrum parse_spectrum_json(const std::string& json_text);
EigenSpectrum load_spectrum_file(const std::string& path);
std::string spectrum_to_json(const EigenSpectrum& s);

}  // namespace smallball
