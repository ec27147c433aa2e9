#include "smallball/spectrum.hpp"

#include <cmath>

#include "smallball/errors.hpp"

namespace smallball {

TailModel TailModel::geometric(double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0))
    raise(errc::bad_parameter, "geometric tail ratio must lie in (0,1)");
  TailModel t;
  t.kind = Kind::geometric;
  t.ratio = ratio;
  return t;
}

TailModel TailModel::power(double exponent) {
  if (!(exponent > 1.0))
    raise(errc::non_summable, "power tail exponent must exceed 1 to certify summability");
  TailModel t;
  t.kind = Kind::power;
  t.exponent = exponent;
  return t;
}

TailModel TailModel::power_envelope(double exponent, double coeff_lo, double coeff_hi) {
  TailModel t = power(exponent);
  if (!(coeff_hi > 0.0) || coeff_lo < 0.0 || coeff_lo > coeff_hi)
    raise(errc::bad_parameter, "power tail envelope requires 0 <= coeff_lo <= coeff_hi, coeff_hi > 0");
  t.coeff_lo = coeff_lo;
  t.coeff_hi = coeff_hi;
  return t;
}

EigenSpectrum EigenSpectrum::polynomial(double beta, std::string description) {
  if (!(beta > 1.0) || !std::isfinite(beta))
    raise(errc::bad_parameter, "polynomial family requires beta > 1");
  EigenSpectrum s;
  s.family_ = Family::polynomial;
  s.beta_ = beta;
  s.description_ = description.empty() ? "polynomial(beta=" + std::to_string(beta) + ")"
                                       : std::move(description);
  return s;
}

EigenSpectrum EigenSpectrum::exponential(double alpha, std::string description) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    raise(errc::bad_parameter, "exponential family requires alpha > 0");
  EigenSpectrum s;
  s.family_ = Family::exponential;
  s.alpha_ = alpha;
  s.description_ = description.empty() ? "exponential(alpha=" + std::to_string(alpha) + ")"
                                       : std::move(description);
  return s;
}

EigenSpectrum EigenSpectrum::explicit_list(std::vector<double> values, TailModel tail,
                                           std::string description) {
  if (values.empty()) raise(errc::bad_parameter, "explicit spectrum requires at least one value");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v))
      raise(errc::bad_parameter, "explicit spectrum values must be positive and finite");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[i - 1])
      raise(errc::not_monotone, "explicit spectrum values must be non-decreasing");
  EigenSpectrum s;
  s.family_ = Family::explicit_list;
  s.values_ = std::move(values);
  s.tail_ = tail;
  if (tail.kind == TailModel::Kind::power && !(tail.coeff_hi > 0.0)) {
    // anchor the upper envelope at the list end: 1/a_i^2 <= (1/a_n^2)(n/i)^p
    const double n = static_cast<double>(s.values_.size());
    const double an2 = s.values_.back() * s.values_.back();
    s.tail_.coeff_hi = std::pow(n, tail.exponent) / an2;
    s.tail_.coeff_lo = 0.0;
  }
  s.description_ = description.empty()
                       ? "explicit(" + std::to_string(s.values_.size()) + " values)"
                       : std::move(description);
  return s;
}

double EigenSpectrum::a_squared(std::size_t i) const {
  switch (family_) {
    case Family::polynomial:
      return std::pow(static_cast<double>(i), beta_);
    case Family::exponential:
      return std::exp(2.0 * alpha_ * static_cast<double>(i));
    case Family::explicit_list:
      if (i == 0 || i > values_.size())
        raise(errc::out_of_range, "explicit spectrum index beyond the stored list");
      return values_[i - 1] * values_[i - 1];
  }
  return 0.0;
}

double EigenSpectrum::a(std::size_t i) const {
  if (family_ == Family::explicit_list) {
    if (i == 0 || i > values_.size())
      raise(errc::out_of_range, "explicit spectrum index beyond the stored list");
    return values_[i - 1];
  }
  return std::sqrt(a_squared(i));
}

Interval EigenSpectrum::tail_sum_bounds(std::size_t n) const {
  const double inf = std::numeric_limits<double>::infinity();
  switch (family_) {
    case Family::polynomial: {
      // convex-integrand sandwich for sum_{i>n} i^-beta:
      //   int_{n+1}^inf f + f(n+1)/2  <=  sum  <=  int_{n+1/2}^inf f
      const double b = beta_;
      const double nn = static_cast<double>(n);
      const double lo =
          std::pow(nn + 1.0, 1.0 - b) / (b - 1.0) + 0.5 * std::pow(nn + 1.0, -b);
      const double hi = std::pow(nn + 0.5, 1.0 - b) / (b - 1.0);
      return {lo, hi};
    }
    case Family::exponential: {
      // exact geometric series of e^{-2 alpha i}
      const double q = std::exp(-2.0 * alpha_);
      const double v = std::pow(q, static_cast<double>(n) + 1.0) / (1.0 - q);
      return {v, v};
    }
    case Family::explicit_list: {
      NeumaierSum partial;
      for (std::size_t i = n + 1; i <= values_.size(); ++i)
        partial.add(1.0 / (values_[i - 1] * values_[i - 1]));
      const double within = partial.value();
      const std::size_t m = std::max(n, values_.size());
      switch (tail_.kind) {
        case TailModel::Kind::none:
          if (n >= values_.size())
            raise(errc::no_tail_model,
                  "tail_sum_bounds beyond an explicit list with no tail model");
          return {within, inf};
        case TailModel::Kind::geometric: {
          const double an2 = values_.back() * values_.back();
          const double r = tail_.ratio;
          const double steps = static_cast<double>(m - values_.size()) + 1.0;
          const double ub = std::pow(r, steps) / (an2 * (1.0 - r));
          return {within, within + ub};
        }
        case TailModel::Kind::power: {
          const double p = tail_.exponent;
          const double mm = static_cast<double>(m);
          const double ub = tail_.coeff_hi * std::pow(mm + 0.5, 1.0 - p) / (p - 1.0);
          const double lb = tail_.coeff_lo * (std::pow(mm + 1.0, 1.0 - p) / (p - 1.0) +
                                              0.5 * std::pow(mm + 1.0, -p));
          return {within + lb, within + ub};
        }
      }
      return {within, inf};
    }
  }
  return {0.0, inf};
}

}  // namespace smallball
