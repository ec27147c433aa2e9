#include "smallball/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "mc_kernel.hpp"
#include "smallball/errors.hpp"
#include "smallball/rng.hpp"

namespace smallball {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDeepTailFloor = 1e-10;
constexpr std::size_t kBlockSamples = 1u << 16;

std::vector<double> coefficients(const EigenSpectrum& s, std::size_t terms, double theta) {
  if (terms == 0) raise(errc::bad_parameter, "oracle requires at least one term");
  if (s.family() == EigenSpectrum::Family::explicit_list && terms > s.values().size())
    raise(errc::out_of_range, "truncation exceeds the explicit spectrum length");
  std::vector<double> c(terms);
  for (std::size_t i = 0; i < terms; ++i) c[i] = 1.0 / (s.a_squared(i + 1) + 2.0 * theta);
  return c;
}

double mu_truncated(const EigenSpectrum& s, std::size_t terms, double theta) {
  NeumaierSum acc;
  for (std::size_t i = 1; i <= terms; ++i) acc.add(1.0 / (s.a_squared(i) + 2.0 * theta));
  return acc.value();
}

// saddlepoint of the truncated sum: mu_N(theta) = epsilon, theta >= 0
double solve_tilt(const EigenSpectrum& s, std::size_t terms, double epsilon) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0)
    raise(errc::degenerate_tilt, "tilt requires a positive finite epsilon");
  if (mu_truncated(s, terms, 0.0) <= epsilon) return 0.0;
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (mu_truncated(s, terms, hi) > epsilon) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 1100) raise(errc::degenerate_tilt, "tilt saddlepoint failed to bracket");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    const double f = mu_truncated(s, terms, mid) - epsilon;
    if (std::abs(f) <= 1e-13 * epsilon) return mid;
    (f > 0.0 ? lo : hi) = mid;
    if (hi - lo <= 1e-14 * hi) return 0.5 * (lo + hi);
  }
  return 0.5 * (lo + hi);
}

double log_mgf_truncated(const EigenSpectrum& s, std::size_t terms, double theta) {
  NeumaierSum acc;
  for (std::size_t i = 1; i <= terms; ++i) acc.add(std::log1p(2.0 * theta / s.a_squared(i)));
  return -0.5 * acc.value();
}

using McSums = detail::McBlockSums;

McSums run_mc(const EigenSpectrum& s, std::span<const double> thresholds, double theta,
              double reference_epsilon, std::size_t terms, std::size_t samples,
              std::uint64_t seed, unsigned threads) {
  std::vector<double> c = coefficients(s, terms, theta);
  const std::size_t n_pairs = terms / 2;
  std::vector<double> pair_avg(n_pairs), pair_dif(n_pairs);
  for (std::size_t p = 0; p < n_pairs; ++p) {
    pair_avg[p] = 0.5 * (c[2 * p] + c[2 * p + 1]);
    pair_dif[p] = 0.5 * (c[2 * p] - c[2 * p + 1]);
  }
  const double odd_coeff = (terms & 1u) ? c[terms - 1] : 0.0;

  const std::size_t n_blocks = (samples + kBlockSamples - 1) / kBlockSamples;
  std::vector<McSums> block_sums(n_blocks);
  unsigned n_workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  n_workers = static_cast<unsigned>(std::min<std::size_t>(n_workers, n_blocks));
  std::atomic<std::size_t> next_block{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t b = next_block.fetch_add(1);
      if (b >= n_blocks) return;
      const std::size_t first = b * kBlockSamples;
      const std::size_t last = std::min(first + kBlockSamples, samples);
      detail::mc_run_block(pair_avg, pair_dif, odd_coeff, thresholds, theta,
                           reference_epsilon, seed, first, last, block_sums[b]);
    }
  };
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  // fixed-order reduction: identical result for any worker count
  McSums total;
  total.s1.assign(thresholds.size(), 0.0);
  total.s2.assign(thresholds.size(), 0.0);
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    NeumaierSum a1, a2;
    for (std::size_t b = 0; b < n_blocks; ++b) {
      a1.add(block_sums[b].s1[k]);
      a2.add(block_sums[b].s2[k]);
    }
    total.s1[k] = a1.value();
    total.s2[k] = a2.value();
  }
  return total;
}

}  // namespace

const char* method_name(OracleEstimate::Method m) noexcept {
  switch (m) {
    case OracleEstimate::Method::mc_plain: return "mc-plain";
    case OracleEstimate::Method::mc_tilted: return "mc-tilted";
    case OracleEstimate::Method::cf_inversion: return "cf-inversion";
  }
  return "unknown";
}

std::vector<McPoint> mc_cdf_multi(const EigenSpectrum& s, std::span<const double> thresholds,
                                  double reference_epsilon, std::size_t terms,
                                  std::size_t samples, std::uint64_t seed, bool tilted,
                                  unsigned threads) {
  if (samples == 0) raise(errc::bad_parameter, "oracle requires at least one sample");
  std::vector<double> ts(thresholds.begin(), thresholds.end());
  std::vector<std::size_t> order(ts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ts[a] < ts[b]; });
  std::vector<double> sorted;
  sorted.reserve(ts.size());
  for (std::size_t i : order) sorted.push_back(ts[i]);

  const double theta = tilted ? solve_tilt(s, terms, reference_epsilon) : 0.0;
  const double shift = tilted && theta > 0.0
                           ? theta * reference_epsilon + log_mgf_truncated(s, terms, theta)
                           : 0.0;
  McSums sums = run_mc(s, sorted, theta, reference_epsilon, terms, samples, seed, threads);

  const double n = static_cast<double>(samples);
  std::vector<McPoint> out(ts.size());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const double m = sums.s1[k] / n;
    double var = 0.0;
    if (samples > 1) var = std::max(0.0, sums.s2[k] / n - m * m) / (n - 1.0);
    double se = std::sqrt(var);
    if (theta == 0.0) se = std::sqrt(std::max(0.0, m * (1.0 - m)) / n);  // Bernoulli form
    McPoint pt;
    pt.epsilon = sorted[k];
    pt.estimate = std::exp(shift) * m;
    pt.log_estimate = m > 0.0 ? shift + std::log(m) : -kInf;
    pt.std_error = std::exp(shift) * se;
    out[order[k]] = pt;
  }
  return out;
}

namespace {

OracleEstimate mc_single(const EigenSpectrum& s, double epsilon, std::size_t terms,
                         std::size_t samples, std::uint64_t seed, bool tilted,
                         unsigned threads) {
  OracleEstimate out;
  out.epsilon = epsilon;
  out.method = tilted ? OracleEstimate::Method::mc_tilted : OracleEstimate::Method::mc_plain;
  out.terms = terms;
  out.samples = samples;
  out.seed = seed;
  if (epsilon <= 0.0) {  // z_N > 0 almost surely
    out.estimate = 0.0;
    out.log_estimate = -kInf;
    (void)coefficients(s, terms, 0.0);  // still validate the truncation
    return out;
  }
  const double ref = epsilon;
  std::vector<McPoint> pts =
      mc_cdf_multi(s, std::span<const double>(&ref, 1), epsilon, terms, samples, seed, tilted,
                   threads);
  out.estimate = pts[0].estimate;
  out.log_estimate = pts[0].log_estimate;
  out.std_error = pts[0].std_error;
  return out;
}

}  // namespace

OracleEstimate mc_plain_cdf(const EigenSpectrum& s, double epsilon, std::size_t terms,
                            std::size_t samples, std::uint64_t seed, unsigned threads) {
  return mc_single(s, epsilon, terms, samples, seed, /*tilted=*/false, threads);
}

OracleEstimate mc_tilted_cdf(const EigenSpectrum& s, double epsilon, std::size_t terms,
                             std::size_t samples, std::uint64_t seed, unsigned threads) {
  return mc_single(s, epsilon, terms, samples, seed, /*tilted=*/true, threads);
}

OracleEstimate cf_inversion_cdf(const EigenSpectrum& s, double epsilon, std::size_t terms,
                                double quad_tol) {
  if (!(quad_tol > 0.0)) raise(errc::bad_parameter, "quad_tol must be positive");
  OracleEstimate out;
  out.epsilon = epsilon;
  out.method = OracleEstimate::Method::cf_inversion;
  out.terms = terms;
  if (epsilon <= 0.0) {
    out.estimate = 0.0;
    out.log_estimate = -kInf;
    (void)coefficients(s, terms, 0.0);
    return out;
  }
  std::vector<double> lam(terms);
  for (std::size_t i = 0; i < terms; ++i) lam[i] = 1.0 / s.a_squared(i + 1);

  auto phase = [&](double u) {
    NeumaierSum acc;
    for (double l : lam) acc.add(std::atan(l * u));
    return 0.5 * acc.value() - 0.5 * epsilon * u;
  };
  auto phase_deriv = [&](double u) {
    NeumaierSum acc;
    for (double l : lam) acc.add(l / (1.0 + l * l * u * u));
    return 0.5 * acc.value() - 0.5 * epsilon;
  };
  auto log_envelope = [&](double u) {
    NeumaierSum acc;
    for (double l : lam) acc.add(std::log1p(l * l * u * u));
    return 0.25 * acc.value();
  };
  auto integrand = [&](double u) {
    if (u <= 0.0) return phase_deriv(0.0);  // limit of sin(xi(u))/(u omega(u)) at zero
    return std::sin(phase(u)) * std::exp(-log_envelope(u)) / u;
  };

  // stationary point of the phase (phase_deriv decreasing)
  double u_star = 0.0;
  if (phase_deriv(0.0) > 0.0) {
    double hi = 1.0;
    int guard = 0;
    while (phase_deriv(hi) > 0.0) {
      hi *= 2.0;
      if (++guard > 400) raise(errc::quadrature_failure, "cf phase never turns over");
    }
    const double lo = (hi == 1.0) ? 0.0 : 0.5 * hi;
    u_star = find_root_bracketed(phase_deriv, lo, hi, phase_deriv(lo), phase_deriv(hi),
                                 1e-6 * epsilon, 1e-6, 200)
                 .x;
  }
  // beyond u1 the phase derivative stays below -eps/4
  double u1 = std::max(u_star, 1.0);
  {
    int guard = 0;
    while (phase_deriv(u1) > -0.25 * epsilon) {
      u1 *= 1.5;
      if (++guard > 400) raise(errc::quadrature_failure, "cf phase derivative stalls");
    }
  }

  const double budget = quad_tol / 3.0;
  QuadratureResult head = integrate_adaptive(integrand, 0.0, u1, 0.0, budget, 200000);

  // oscillatory tail: integrate between consecutive zeros of sin(xi). The pieces
  // then alternate with decreasing magnitude, so partial sums bracket the limit
  // and repeated averaging accelerates them.
  double tail_value = 0.0;
  double tail_err = 0.0;
  {
    auto accelerate = [](std::span<const double> partial) {
      std::vector<double> row(partial.begin(), partial.end());
      double prev = row.back();
      double curr = prev;
      while (row.size() > 1) {
        for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
        row.pop_back();
        prev = curr;
        curr = row.back();
      }
      return std::pair<double, double>(curr, std::abs(curr - prev));
    };

    std::vector<double> partial;
    NeumaierSum acc;
    double u = u1;
    double xi_u = phase(u);
    double m = std::floor(xi_u / M_PI);  // next zero target: xi = m pi (xi decreasing)
    bool plain_done = false;
    double last_piece = 0.0;
    const std::size_t max_pieces = 4096;
    for (std::size_t k = 0; k < max_pieces; ++k) {
      const double ibp = 2.0 * std::exp(-log_envelope(u)) / (u * std::abs(phase_deriv(u)));
      if (ibp <= budget || (k > 2 && std::abs(last_piece) <= 0.02 * budget)) {
        tail_value = acc.value();
        tail_err = std::min(ibp, k > 0 ? std::abs(last_piece) : ibp);
        plain_done = true;
        break;
      }
      // bracket the zero xi(u) = m pi ahead of u and polish it
      double step = M_PI / std::abs(phase_deriv(u));
      double hi = u + step;
      int guard = 0;
      while (phase(hi) - m * M_PI > 0.0) {
        hi += 0.5 * step;
        if (++guard > 200) raise(errc::quadrature_failure, "cf tail zero hunt stalled");
      }
      const double z = find_root_bracketed(
                           [&](double x) { return phase(x) - m * M_PI; }, u, hi,
                           xi_u - m * M_PI, phase(hi) - m * M_PI, 1e-9, 1e-13, 200)
                           .x;
      last_piece = integrate_gl(integrand, u, z, 16);
      acc.add(last_piece);
      partial.push_back(acc.value());
      u = z;
      xi_u = m * M_PI;
      m -= 1.0;
      if (partial.size() >= 32 && (partial.size() & 31) == 0) {
        auto [a_full, d_full] = accelerate(
            std::span<const double>(partial).last(std::min<std::size_t>(partial.size(), 96)));
        auto [a_half, d_half] = accelerate(
            std::span<const double>(partial).last(std::min<std::size_t>(partial.size(), 48)));
        const double err = d_full + std::abs(a_full - a_half);
        if (err <= 0.5 * budget) {
          tail_value = a_full;
          tail_err = err;
          plain_done = true;
          break;
        }
      }
    }
    if (!plain_done) {
      if (partial.size() < 8)
        raise(errc::quadrature_failure, "cf inversion tail did not settle");
      auto [a_full, d_full] = accelerate(
          std::span<const double>(partial).last(std::min<std::size_t>(partial.size(), 96)));
      auto [a_half, d_half] = accelerate(
          std::span<const double>(partial).last(std::min<std::size_t>(partial.size(), 48)));
      tail_value = a_full;
      tail_err = d_full + std::abs(a_full - a_half);
      if (tail_err > budget)
        raise(errc::quadrature_failure, "cf inversion tail acceleration error " +
                                            std::to_string(tail_err) + " above budget");
    }
  }

  const double integral = head.value + tail_value;
  const double err = head.error + tail_err;
  if (err > quad_tol)
    raise(errc::quadrature_failure,
          "cf inversion error estimate " + std::to_string(err) + " above quad_tol");
  double p = 0.5 - integral / M_PI;
  p = std::clamp(p, 0.0, 1.0);
  if (p < kDeepTailFloor)
    raise(errc::underflow_regime,
          "cf inversion below its trust floor; use mc_tilted_cdf for the deep tail");
  out.estimate = p;
  out.log_estimate = std::log(p);
  out.std_error = 0.0;
  return out;
}

std::vector<double> bracket_delta_grid(double epsilon, double tail_mean_hi) {
  const double lo = std::max(tail_mean_hi * 1.02, epsilon * 1e-7);
  const double hi = 0.5 * epsilon;
  std::vector<double> grid;
  if (!(lo < hi)) {
    grid.push_back(hi);
    return grid;
  }
  const int n = 16;
  for (int k = 0; k < n; ++k)
    grid.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1)));
  return grid;
}

Interval truncation_bracket(const EigenSpectrum& s, double epsilon, std::size_t terms,
                            const std::function<PointEstimate(double)>& inner_cdf) {
  if (!(epsilon > 0.0)) raise(errc::bad_parameter, "bracket requires epsilon > 0");
  Interval tail = s.tail_sum_bounds(terms);
  const double t_mean = tail.hi;
  if (!std::isfinite(t_mean) || t_mean >= epsilon)
    raise(errc::vacuous_bracket, "tail mean bound " + std::to_string(t_mean) +
                                     " leaves no room below epsilon");
  // smallest possible a_{N+1}^2 for the Chernoff divisor
  double a_next = kInf;
  if (s.family() == EigenSpectrum::Family::explicit_list) {
    const auto& tm = s.tail_model();
    const std::size_t len = s.values().size();
    if (terms < len) {
      a_next = s.a_squared(terms + 1);
    } else if (tm.kind == TailModel::Kind::power) {
      a_next = std::pow(static_cast<double>(terms + 1), tm.exponent) / tm.coeff_hi;
    } else if (tm.kind == TailModel::Kind::geometric) {
      const double an2 = s.values().back() * s.values().back();
      a_next = an2 / std::pow(tm.ratio, static_cast<double>(terms + 1 - len));
    }
  } else {
    a_next = s.a_squared(terms + 1);
  }

  auto tail_prob_bound = [&](double delta) {
    double bound = t_mean / delta;  // Markov
    if (std::isfinite(a_next) && delta > t_mean) {
      const double r = std::sqrt(t_mean / delta);
      const double expo = 0.5 * a_next * delta * (1.0 - r) * (1.0 - r);
      bound = std::min(bound, std::exp(-expo));
    }
    return bound;
  };

  PointEstimate at_eps = inner_cdf(epsilon);
  const double upper = std::min(1.0, at_eps.estimate + 3.0 * at_eps.uncertainty);
  double lower = -kInf;
  for (double delta : bracket_delta_grid(epsilon, t_mean)) {
    PointEstimate pe = inner_cdf(epsilon - delta);
    const double cand = pe.estimate - 3.0 * pe.uncertainty - tail_prob_bound(delta);
    lower = std::max(lower, cand);
  }
  if (!(lower > 0.0))
    raise(errc::vacuous_bracket, "no delta yields a positive lower bound; increase N");
  return {lower, upper};
}

}  // namespace smallball
