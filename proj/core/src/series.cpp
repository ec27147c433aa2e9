#include "smallball/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smallball/errors.hpp"
#include "smallball/numeric.hpp"

namespace smallball {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// g(u) = log(1+u) - u/(1+u) >= 0; the I-series term is g(2 theta / a_i^2)/2.
// Power series for small u avoids the cancellation between the two branches.
inline double g_fun(double u) {
  if (u < 1e-4) {
    return u * u * (0.5 + u * (-2.0 / 3.0 + u * (0.75 + u * (-0.8))));
  }
  return std::log1p(u) - u / (1.0 + u);
}

// Series building blocks over the index line with a^2 = x^beta:
//   k = 1,2,3 : f(x) = (x^beta + 2 theta)^-k
//   k = 0     : f(x) = g(2 theta x^-beta)/2
struct PolyBlock {
  double beta;
  double theta;
  int k;

  double f(double x) const {
    const double xb = std::pow(x, beta);
    if (k == 0) {
      if (theta == 0.0) return 0.0;
      return 0.5 * g_fun(2.0 * theta / xb);
    }
    const double t = 1.0 / (xb + 2.0 * theta);
    double r = t;
    for (int j = 1; j < k; ++j) r *= t;
    return r;
  }

  double abs_fprime(double x) const {
    const double xb = std::pow(x, beta);
    if (k == 0) {
      if (theta == 0.0) return 0.0;
      const double u = 2.0 * theta / xb;
      return beta * u * u / (2.0 * x * (1.0 + u) * (1.0 + u));
    }
    const double t = 1.0 / (xb + 2.0 * theta);
    double tk1 = t;
    for (int j = 0; j < k; ++j) tk1 *= t;
    return k * beta * (xb / x) * tk1;
  }

  // f is convex on [convex_from(), inf)
  double convex_from() const {
    if (k == 0 || theta == 0.0) return 0.0;
    return std::pow(2.0 * theta * (beta - 1.0) / (k * beta + 1.0), 1.0 / beta);
  }

  // rigorous upper bound for the integral of f over [b, inf)
  double integral_majorant(double b) const {
    if (k == 0) {
      // g(u) <= u^2/2
      return theta * theta * std::pow(b, 1.0 - 2.0 * beta) / (2.0 * beta - 1.0);
    }
    const double kb = k * beta;
    return std::pow(b, 1.0 - kb) / (kb - 1.0);
  }
};

// Total variation of f' on [a, inf): |f'| peaks where f'' changes sign (the
// convexity threshold), so the variation is |f'(a)| beyond it and
// 2|f'(x0)| - |f'(a)| before it.
double fprime_variation(const PolyBlock& pb, double a) {
  const double x0 = pb.convex_from();
  if (a >= x0) return pb.abs_fprime(a);
  return 2.0 * pb.abs_fprime(x0) - pb.abs_fprime(a);
}

// Rigorous enclosure of sum_{i>n} f(i), intersecting three certificates:
// monotone decreasing: [J(n+1), J(n+1) + int_n^{n+1} f]
// convex in addition:  [J(n+1) + f(n+1)/2, J(n+1) + int_{n+1/2}^{n+1} f]
// Euler-Maclaurin:     J(n+1) + f(n+1)/2 + |f'(n+1)|/12 +- TV(f')/12
Interval poly_remainder_bracket(const PolyBlock& pb, double n) {
  auto f = [&pb](double x) { return pb.f(x); };
  auto maj = [&pb](double b) { return pb.integral_majorant(b); };
  TailIntegral j = integrate_dyadic_to_inf(f, n + 1.0, maj);
  const double w_full = integrate_gl(f, n, n + 1.0);
  const double f_next = pb.f(n + 1.0);
  double lo = j.value - j.slack;
  double hi = j.value + j.slack + w_full * (1.0 + 3e-16);
  if (n + 0.5 >= pb.convex_from()) {
    const double w_half = integrate_gl(f, n + 0.5, n + 1.0);
    lo = std::max(lo, j.value - j.slack + 0.5 * f_next);
    hi = std::min(hi, j.value + j.slack + w_half * (1.0 + 3e-16));
  }
  {
    const double em = j.value + 0.5 * f_next + pb.abs_fprime(n + 1.0) / 12.0;
    const double rem = fprime_variation(pb, n + 1.0) / 12.0;
    lo = std::max(lo, em - rem - j.slack);
    hi = std::min(hi, em + rem + j.slack);
  }
  lo = std::max(lo, 0.0);
  if (lo > hi) lo = hi;
  return {lo, hi};
}

struct BlockOut {
  double value = 0.0;
  double err = 0.0;
  std::size_t terms = 0;
};

inline double term_from_a2(double a2, double theta, int k) {
  if (k == 0) {
    if (theta == 0.0) return 0.0;
    return 0.5 * g_fun(2.0 * theta / a2);
  }
  const double t = 1.0 / (a2 + 2.0 * theta);
  double r = t;
  for (int j = 1; j < k; ++j) r *= t;
  return r;
}

// tol_floor = 1 gives the policy's absolute-above-one semantics; 0 asks for a
// purely relative certificate (used by derived quantities that rescale the block).
template <class A2OfIndex>
BlockOut eval_block_polynomial_impl(double beta, double theta, int k,
                                    const TruncationPolicy& pol, double tol_floor,
                                    A2OfIndex a2_of) {
  PolyBlock pb{beta, theta, k};
  const double x0 = pb.convex_from();
  NeumaierSum partial;
  std::size_t cursor = 1;
  std::size_t n = std::min<std::size_t>(64, pol.max_terms);
  for (;;) {
    for (; cursor <= n; ++cursor)
      partial.add(term_from_a2(a2_of(static_cast<double>(cursor)), theta, k));
    const double p = partial.value();
    const double eff_tol =
        pol.tail_tolerance * std::max({tol_floor, std::abs(p), 1e-290});
    const double nn = static_cast<double>(n);
    // cheap width estimate before paying for the integral bracket
    double probe = std::min(0.5 * pb.f(nn), fprime_variation(pb, nn) / 12.0);
    if (nn + 0.5 >= x0) probe = std::min(probe, 0.125 * pb.abs_fprime(nn));
    if (probe <= 4.0 * eff_tol || n >= pol.max_terms) {
      Interval br = poly_remainder_bracket(pb, nn);
      const double mid = br.mid();
      const double err = 0.5 * br.width() + 2e-16 * (std::abs(p) + mid) + 1e-300;
      const double value = p + mid;
      if (err <= pol.tail_tolerance * std::max({tol_floor, std::abs(value), 1e-290}))
        return {value, err, n};
      if (n >= pol.max_terms)
        raise(errc::tolerance_unreachable,
              "series truncation bound still " + std::to_string(err) + " at max_terms");
    }
    n = std::min(n * 4, pol.max_terms);
  }
}

BlockOut eval_block_polynomial(double beta, double theta, int k, const TruncationPolicy& pol,
                               double tol_floor) {
  if (beta == 2.0)
    return eval_block_polynomial_impl(beta, theta, k, pol, tol_floor,
                                      [](double x) { return x * x; });
  if (beta == 3.0)
    return eval_block_polynomial_impl(beta, theta, k, pol, tol_floor,
                                      [](double x) { return x * x * x; });
  if (beta == 1.5)
    return eval_block_polynomial_impl(beta, theta, k, pol, tol_floor,
                                      [](double x) { return x * std::sqrt(x); });
  return eval_block_polynomial_impl(beta, theta, k, pol, tol_floor,
                                    [beta](double x) { return std::pow(x, beta); });
}

double exp_remainder_ub(double alpha, double theta, int k, double n) {
  // term(i) <= a_i^{-2k} = e^{-2 k alpha i}; for the I block, g(u)/2 <= u^2/4.
  const int kk = (k == 0) ? 2 : k;
  const double q = std::exp(-2.0 * kk * alpha);
  double ub = std::pow(q, n + 1.0) / (1.0 - q);
  if (k == 0) ub *= theta * theta;
  return ub;
}

BlockOut eval_block_exponential(double alpha, double theta, int k, const TruncationPolicy& pol,
                                double tol_floor) {
  NeumaierSum partial;
  std::size_t n = 0;
  for (;;) {
    const std::size_t next = std::min(n + 32, pol.max_terms);
    for (std::size_t i = n + 1; i <= next; ++i) {
      const double a2 = std::exp(2.0 * alpha * static_cast<double>(i));
      partial.add(std::isinf(a2) ? 0.0 : term_from_a2(a2, theta, k));
    }
    n = next;
    const double p = partial.value();
    const double ub = exp_remainder_ub(alpha, theta, k, static_cast<double>(n));
    const double err = 0.5 * ub + 2e-16 * std::abs(p) + 1e-300;
    const double value = p + 0.5 * ub;
    if (err <= pol.tail_tolerance * std::max({tol_floor, std::abs(value), 1e-290}))
      return {value, err, n};
    if (n >= pol.max_terms)
      raise(errc::tolerance_unreachable, "exponential-family series hit max_terms");
  }
}

BlockOut eval_block_explicit(const EigenSpectrum& s, double theta, int k,
                             const TruncationPolicy& pol, double tol_floor) {
  const auto& vals = s.values();
  const std::size_t len = vals.size();
  const std::size_t m = std::min(len, pol.max_terms);
  NeumaierSum partial;
  for (std::size_t i = 0; i < m; ++i) partial.add(term_from_a2(vals[i] * vals[i], theta, k));
  double rem_lo = 0.0, rem_hi = 0.0;
  if (m < len) {
    const double cnt = static_cast<double>(len - m);
    rem_lo += cnt * term_from_a2(vals[len - 1] * vals[len - 1], theta, k);
    rem_hi += cnt * term_from_a2(vals[m] * vals[m], theta, k);
  }
  const TailModel& tail = s.tail_model();
  const double a_last2 = vals[len - 1] * vals[len - 1];
  switch (tail.kind) {
    case TailModel::Kind::none:
      raise(errc::no_tail_model,
            "series on an explicit spectrum requires a tail model beyond the list");
    case TailModel::Kind::geometric: {
      const int kk = (k == 0) ? 2 : k;
      const double rk = std::pow(tail.ratio, kk);
      double ub = std::pow(1.0 / a_last2, kk) * rk / (1.0 - rk);
      if (k == 0) ub *= theta * theta;
      rem_hi += ub;
      break;
    }
    case TailModel::Kind::power: {
      // envelope coeff * i^-p for 1/a_i^2 maps each side onto a polynomial block:
      // (i^p/c + 2 theta)^-k = c^k (i^p + 2 theta c)^-k
      const double p = tail.exponent;
      if (tail.coeff_hi > 0.0) {
        PolyBlock hi_block{p, theta * tail.coeff_hi, k};
        double scale = (k == 0) ? 1.0 : std::pow(tail.coeff_hi, k);
        rem_hi += scale * poly_remainder_bracket(hi_block, static_cast<double>(len)).hi;
      }
      if (tail.coeff_lo > 0.0) {
        PolyBlock lo_block{p, theta * tail.coeff_lo, k};
        double scale = (k == 0) ? 1.0 : std::pow(tail.coeff_lo, k);
        rem_lo += scale * poly_remainder_bracket(lo_block, static_cast<double>(len)).lo;
      }
      break;
    }
  }
  const double pv = partial.value();
  const double mid = 0.5 * (rem_lo + rem_hi);
  const double err = 0.5 * (rem_hi - rem_lo) + 2e-16 * (std::abs(pv) + mid) + 1e-300;
  const double value = pv + mid;
  if (err > pol.tail_tolerance * std::max({tol_floor, std::abs(value), 1e-290}))
    raise(errc::tolerance_unreachable,
          "explicit-spectrum tail certificate is wider than the requested tolerance");
  return {value, err, m};
}

BlockOut eval_block(const EigenSpectrum& s, double theta, int k, const TruncationPolicy& pol,
                    double tol_floor = 1.0) {
  switch (s.family()) {
    case EigenSpectrum::Family::polynomial:
      return eval_block_polynomial(s.beta(), theta, k, pol, tol_floor);
    case EigenSpectrum::Family::exponential:
      return eval_block_exponential(s.alpha(), theta, k, pol, tol_floor);
    case EigenSpectrum::Family::explicit_list:
      return eval_block_explicit(s, theta, k, pol, tol_floor);
  }
  raise(errc::bad_parameter, "unknown spectrum family");
}

void require_theta(double theta, bool strictly_positive = false) {
  if (!std::isfinite(theta) || theta < 0.0 || (strictly_positive && theta == 0.0))
    raise(errc::domain_error, strictly_positive ? "theta must be positive and finite"
                                                : "theta must be nonnegative and finite");
}

}  // namespace

SeriesValue eval_mu(const EigenSpectrum& s, double theta, const TruncationPolicy& policy) {
  require_theta(theta);
  BlockOut b = eval_block(s, theta, 1, policy);
  return {b.value, b.err, b.terms};
}

SeriesValue eval_mu_prime(const EigenSpectrum& s, double theta, const TruncationPolicy& policy) {
  require_theta(theta);
  BlockOut b = eval_block(s, theta, 2, policy);
  return {-2.0 * b.value, 2.0 * b.err, b.terms};
}

SeriesValue eval_psi(const EigenSpectrum& s, double theta, const TruncationPolicy& policy) {
  require_theta(theta);
  if (theta == 0.0) return {0.0, 0.0, 1};
  TruncationPolicy inner = policy;
  inner.tail_tolerance = policy.tail_tolerance * 0.1;
  BlockOut b = eval_block(s, theta, 2, inner, /*tol_floor=*/0.0);
  const double s2 = 2.0 * theta * theta;
  const double value = std::sqrt(s2 * b.value);
  const double lo = std::sqrt(s2 * std::max(b.value - b.err, 0.0));
  const double hi = std::sqrt(s2 * (b.value + b.err));
  return {value, std::max(hi - value, value - lo) + 2e-16 * value, b.terms};
}

SeriesValue eval_I(const EigenSpectrum& s, double theta, const TruncationPolicy& policy) {
  require_theta(theta);
  if (theta == 0.0) return {0.0, 0.0, 1};
  BlockOut b = eval_block(s, theta, 0, policy);
  return {b.value, b.err, b.terms};
}

SeriesValue eval_log_psi_prime(const EigenSpectrum& s, double theta,
                               const TruncationPolicy& policy) {
  require_theta(theta, /*strictly_positive=*/true);
  TruncationPolicy inner = policy;
  inner.tail_tolerance = policy.tail_tolerance * 0.01;
  BlockOut b2 = eval_block(s, theta, 2, inner, /*tol_floor=*/0.0);
  BlockOut b3 = eval_block(s, theta, 3, inner, /*tol_floor=*/0.0);
  const double tiny = std::numeric_limits<double>::min();
  const double r_mid = b3.value / b2.value;
  const double r_lo = std::max(b3.value - b3.err, 0.0) / (b2.value + b2.err);
  const double r_hi = (b3.value + b3.err) / std::max(b2.value - b2.err, tiny);
  const double value = (1.0 - 2.0 * theta * r_mid) / theta;
  const double v_lo = (1.0 - 2.0 * theta * r_hi) / theta;
  const double v_hi = (1.0 - 2.0 * theta * r_lo) / theta;
  const double err = std::max(v_hi - value, value - v_lo) + 2e-16 * std::abs(value);
  return {value, err, std::max(b2.terms, b3.terms)};
}

std::size_t count_N(const EigenSpectrum& s, double theta) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) return 0;
  if (theta < s.a_squared(1)) return 0;
  switch (s.family()) {
    case EigenSpectrum::Family::polynomial: {
      double x = std::pow(theta, 1.0 / s.beta());
      auto n = static_cast<std::size_t>(std::max(1.0, std::floor(x)));
      while (n > 1 && s.a_squared(n) > theta) --n;
      while (s.a_squared(n + 1) <= theta) ++n;
      return n;
    }
    case EigenSpectrum::Family::exponential: {
      double x = std::log(theta) / (2.0 * s.alpha());
      auto n = static_cast<std::size_t>(std::max(1.0, std::floor(x)));
      while (n > 1 && s.a_squared(n) > theta) --n;
      while (s.a_squared(n + 1) <= theta) ++n;
      return n;
    }
    case EigenSpectrum::Family::explicit_list: {
      // binary search for the count of entries with a_i^2 <= theta
      const auto& v = s.values();
      std::size_t lo = 0, hi = v.size();
      while (lo < hi) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (v[mid] * v[mid] <= theta)
          lo = mid + 1;
        else
          hi = mid;
      }
      return lo;
    }
  }
  return 0;
}

}  // namespace smallball
