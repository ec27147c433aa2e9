#include "smallball/gamma_class.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smallball/errors.hpp"

namespace smallball {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_decreasing(std::span<const double> s_grid) {
  if (s_grid.empty()) raise(errc::bad_parameter, "s grid must be non-empty");
  for (double s : s_grid)
    if (!(s > 0.0) || !std::isfinite(s)) raise(errc::bad_parameter, "s grid must be positive");
  for (std::size_t i = 1; i < s_grid.size(); ++i)
    if (!(s_grid[i] < s_grid[i - 1]))
      raise(errc::bad_parameter, "s grid must be strictly decreasing");
}

GammaCheckReport::Verdict trend_verdict(const std::vector<double>& errs, double threshold) {
  if (errs.empty()) return GammaCheckReport::Verdict::inconclusive;
  const double last = errs.back();
  bool improving = true;
  const std::size_t window = std::min<std::size_t>(3, errs.size());
  for (std::size_t i = errs.size() - window + 1; i < errs.size(); ++i)
    if (!(errs[i] < errs[i - 1])) improving = false;
  if (errs.size() < 2) improving = false;
  if (last <= threshold && improving) return GammaCheckReport::Verdict::pass;
  if (last > threshold) return GammaCheckReport::Verdict::fail;
  return GammaCheckReport::Verdict::inconclusive;
}

GammaCheckReport ratio_check(const std::function<double(double, double)>& log_ratio_fn,
                             const std::vector<double>& targets,
                             std::span<const double> s_grid, std::span<const double> x_grid,
                             double threshold) {
  require_decreasing(s_grid);
  if (x_grid.empty()) raise(errc::bad_parameter, "x grid must be non-empty");
  GammaCheckReport rep;
  rep.s_grid.assign(s_grid.begin(), s_grid.end());
  rep.x_grid.assign(x_grid.begin(), x_grid.end());
  rep.targets = targets;
  rep.threshold = threshold;
  rep.ratios.resize(s_grid.size());
  rep.max_rel_error.resize(s_grid.size());
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    rep.ratios[i].resize(x_grid.size());
    double worst = 0.0;
    for (std::size_t j = 0; j < x_grid.size(); ++j) {
      const double lr = log_ratio_fn(s_grid[i], x_grid[j]);
      const double ratio = std::exp(lr);
      rep.ratios[i][j] = ratio;
      const double rel = std::abs(ratio / targets[j] - 1.0);
      worst = std::max(worst, rel);
    }
    rep.max_rel_error[i] = worst;
  }
  rep.verdict = trend_verdict(rep.max_rel_error, threshold);
  return rep;
}

}  // namespace

const char* verdict_name(GammaCheckReport::Verdict v) noexcept {
  switch (v) {
    case GammaCheckReport::Verdict::pass: return "pass";
    case GammaCheckReport::Verdict::fail: return "fail";
    case GammaCheckReport::Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

GammaCheckReport gamma_membership_check(const LogF& log_f, const AuxFunction& rho,
                                        std::span<const double> s_grid,
                                        std::span<const double> x_grid, double threshold) {
  std::vector<double> targets;
  targets.reserve(x_grid.size());
  for (double x : x_grid) targets.push_back(std::exp(x));
  auto log_ratio = [&](double s, double x) {
    if (x == 0.0) return 0.0;
    const double r = rho(s);
    const double arg = s + x * r;
    if (arg <= 0.0) return -kInf;  // F is null on (-inf, 0]
    return log_f(arg) - log_f(s);
  };
  return ratio_check(log_ratio, targets, s_grid, x_grid, threshold);
}

GammaCheckReport self_neglect_check(const AuxFunction& rho, std::span<const double> s_grid,
                                    std::span<const double> x_grid, double threshold) {
  std::vector<double> targets(x_grid.size(), 1.0);
  auto log_ratio = [&](double s, double x) {
    if (x == 0.0) return 0.0;
    const double r = rho(s);
    const double arg = s + x * r;
    if (arg <= 0.0) return -kInf;
    return std::log(rho(arg)) - std::log(r);
  };
  return ratio_check(log_ratio, targets, s_grid, x_grid, threshold);
}

double estimate_aux(const LogF& log_f, double s, double quad_tol) {
  if (!(s > 0.0) || !std::isfinite(s)) raise(errc::domain_error, "estimate_aux requires s > 0");
  const double log_fs = log_f(s);
  if (!std::isfinite(log_fs))
    raise(errc::quadrature_failure, "F is zero or undefined at the evaluation point");
  auto integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    const double lf = log_f(t);
    if (lf == -kInf) return 0.0;  // F vanishes: zero contribution
    if (std::isnan(lf)) raise(errc::quadrature_failure, "log F returned NaN inside [0, s]");
    const double d = lf - log_fs;
    return d < -745.0 ? 0.0 : std::exp(d);  // underflow-to-zero
  };
  QuadratureResult q = integrate_adaptive(integrand, 0.0, s, quad_tol, 0.0, 20000);
  return q.value;
}

AuxFunction make_estimated_aux(const LogF& log_f, double s_max, double quad_tol) {
  AuxFunction aux;
  aux.provenance = AuxFunction::Provenance::estimated_from_f;
  aux.s_max = s_max;
  aux.eval = [log_f, quad_tol](double s) { return estimate_aux(log_f, s, quad_tol); };
  return aux;
}

std::vector<FlatnessRow> flatness_probe(const LogF& log_f, int p_max,
                                        std::span<const double> s_grid) {
  require_decreasing(s_grid);
  if (p_max < 0) raise(errc::bad_parameter, "p_max must be nonnegative");
  std::vector<FlatnessRow> rows;
  rows.reserve(p_max + 1);
  std::vector<double> log_f_vals;
  log_f_vals.reserve(s_grid.size());
  for (double s : s_grid) log_f_vals.push_back(log_f(s));
  for (int p = 0; p <= p_max; ++p) {
    FlatnessRow row;
    row.p = p;
    row.log_ratio.reserve(s_grid.size());
    for (std::size_t k = 0; k < s_grid.size(); ++k)
      row.log_ratio.push_back(log_f_vals[k] - p * std::log(s_grid[k]));
    row.decreasing = true;
    for (std::size_t k = 1; k < row.log_ratio.size(); ++k)
      if (!(row.log_ratio[k] < row.log_ratio[k - 1])) row.decreasing = false;
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

// generalized inverse of t -> 1/rho(t) (decreasing); returns the epsilon-like t
double mu_tilde(const AuxFunction& rho, double u) {
  const double hi = rho.s_max * (1.0 - 1e-12);
  auto h = [&](double t) { return 1.0 / rho(t); };
  if (u <= h(hi)) return hi;
  double a = hi;
  int guard = 0;
  while (h(a) < u) {
    a *= 0.5;
    if (a <= 0.0 || ++guard > 4000)
      raise(errc::domain_error, "1/rho does not reach the requested level");
  }
  // bisection on log t; h is decreasing, h(a) >= u > h(b)
  double b = std::min(hi, a * 2.0);
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(a * b);
    if (h(mid) > u)
      a = mid;
    else
      b = mid;
    if (b - a <= 1e-14 * b) break;
  }
  return std::sqrt(a * b);
}

}  // namespace

EigenSpectrum reconstruct_spectrum(const AuxFunction& rho, double c, std::size_t i_max) {
  if (!(c > 0.0)) raise(errc::bad_parameter, "reconstruction constant must be positive");
  if (i_max < 10) raise(errc::bad_parameter, "i_max must be at least 10 to fit a tail model");

  // regular-variation probe over two decades: log-log slope must be stable and
  // rho(s)/s must shrink
  {
    const double s_hi = rho.s_max * 0.5;
    const int m = 17;
    std::vector<double> xs(m), ys(m);
    for (int k = 0; k < m; ++k) {
      const double s = s_hi * std::pow(10.0, -2.0 * k / (m - 1.0));
      xs[k] = std::log(s);
      const double r = rho(s);
      if (!(r > 0.0)) raise(errc::domain_error, "rho must be positive on the probe grid");
      ys[k] = std::log(r);
    }
    std::vector<double> slopes(m - 1);
    double mean = 0.0;
    for (int k = 0; k + 1 < m; ++k) {
      slopes[k] = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]);
      mean += slopes[k];
    }
    mean /= (m - 1);
    for (double sl : slopes)
      if (std::abs(sl - mean) > 0.01 * std::max(1.0, std::abs(mean)))
        raise(errc::not_regularly_varying,
              "log-log slope of rho drifts by more than 1e-2 over two decades");
    const double ratio_hi = std::exp(ys[0] - xs[0]);
    const double ratio_lo = std::exp(ys[m - 1] - xs[m - 1]);
    if (!(ratio_lo <= 0.9 * ratio_hi))
      raise(errc::not_regularly_varying, "rho(s)/s does not tend to zero on the probe grid");
  }

  // a_i^2 = C phi^{-1}(i), phi(u) = u mu~(u) increasing
  auto phi = [&](double u) { return u * mu_tilde(rho, u); };
  std::vector<double> values(i_max);
  double lo_seed = 1.0 / rho(rho.s_max * 0.5);
  for (std::size_t i = 1; i <= i_max; ++i) {
    const double target = static_cast<double>(i);
    double lo = lo_seed, hi = lo_seed;
    int guard = 0;
    while (phi(lo) > target) {
      lo *= 0.5;
      if (++guard > 4000) raise(errc::domain_error, "phi inverse failed to bracket from below");
    }
    guard = 0;
    while (phi(hi) < target) {
      hi *= 2.0;
      if (++guard > 4000) raise(errc::domain_error, "phi inverse failed to bracket from above");
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = std::sqrt(lo * hi);
      if (phi(mid) < target)
        lo = mid;
      else
        hi = mid;
      if (hi - lo <= 1e-13 * hi) break;
    }
    const double inv = std::sqrt(lo * hi);
    values[i - 1] = std::sqrt(c * inv);
    lo_seed = inv;  // phi^{-1} is increasing in i
    if (i > 1 && values[i - 1] < values[i - 2]) values[i - 1] = values[i - 2];
  }

  // power-law tail certificate from the last decade
  const std::size_t fit_from = std::max<std::size_t>(1, i_max / 10);
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  for (std::size_t i = fit_from; i <= i_max; ++i) {
    rows.push_back({1.0, std::log(static_cast<double>(i))});
    y.push_back(-2.0 * std::log(values[i - 1]));  // log(1/a_i^2)
  }
  double rms = 0.0;
  std::vector<double> b = least_squares(rows, y, &rms);
  const double p = -b[1];
  if (!(p > 1.0))
    raise(errc::non_summable, "fitted tail exponent " + std::to_string(p) +
                                  " does not certify summability");
  double res_lo = kInf, res_hi = -kInf;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double resid = y[r] - (b[0] + b[1] * rows[r][1]);
    res_lo = std::min(res_lo, resid);
    res_hi = std::max(res_hi, resid);
  }
  const double margin = 3.0 * rms + 1e-12;
  const double coeff = std::exp(b[0]);
  TailModel tail = TailModel::power_envelope(p, coeff * std::exp(res_lo - margin),
                                             coeff * std::exp(res_hi + margin));
  return EigenSpectrum::explicit_list(std::move(values), tail,
                                      "reconstructed from auxiliary function");
}

std::vector<double> step_sequence(const AuxFunction& rho, double x0, std::size_t n_max,
                                  double floor) {
  if (!(x0 > 0.0) || x0 > rho.s_max)
    raise(errc::domain_error, "x0 must lie in rho's domain");
  std::vector<double> xs{x0};
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double x = xs.back();
    const double next = x - rho(x);
    if (!(next > 0.0))
      raise(errc::leaves_domain,
            "step sequence leaves (0, inf) at n = " + std::to_string(n) +
                "; x0 is not small enough for this rho");
    if (next < floor) break;
    xs.push_back(next);
  }
  return xs;
}

SmoothDensity bump_density() {
  static const double z = [] {
    auto raw = [](double t) {
      if (t <= 0.0 || t >= 1.0) return 0.0;
      return std::exp(-1.0 / (t * (1.0 - t)));
    };
    return integrate_adaptive(raw, 0.0, 1.0, 1e-13, 0.0, 20000).value;
  }();
  SmoothDensity d;
  d.name = "bump";
  d.pdf = [](double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return std::exp(-1.0 / (t * (1.0 - t))) / z;
  };
  return d;
}

double SelfNeglectRepr::eps_at(double u) const {
  if (u <= 0.0 || u > upper || u < grid.back()) return 0.0;
  if (u >= grid.front()) return head_coeff * rho(u);
  // locate the interval [x_{k+1}, x_k] containing u (grid is decreasing)
  auto it = std::upper_bound(grid.begin(), grid.end(), u, std::greater<double>());
  const std::size_t k = static_cast<std::size_t>(it - grid.begin());
  if (k == 0 || k >= grid.size()) return 0.0;
  const double x_hi = grid[k - 1];
  const double x_lo = grid[k];
  const double t = (x_hi - u) / (x_hi - x_lo);
  return interval_slope[k - 1] * density.pdf(t) * rho(u);
}

double SelfNeglectRepr::log_phi_at_grid(std::size_t k) const {
  // telescoping of the per-interval identity; the head integral equals log phi(x_0)
  // and each interval adds slope * width (the density integrates to one)
  double acc = (upper - grid[0]) * head_coeff;
  for (std::size_t j = 0; j < k; ++j) acc += interval_slope[j] * (grid[j] - grid[j + 1]);
  return acc;
}

SelfNeglectRepr build_self_neglect_repr(const std::function<double(double)>& phi,
                                        const AuxFunction& rho, double x0,
                                        const SmoothDensity& density, std::size_t n_max) {
  SelfNeglectRepr rep;
  rep.rho = rho;
  rep.density = density;
  rep.upper = std::min(1.0, rho.s_max);
  if (!(x0 < rep.upper))
    raise(errc::domain_error, "x0 must lie strictly below the head segment's upper end");
  rep.grid = step_sequence(rho, x0, n_max);
  if (rep.grid.size() < 3)
    raise(errc::bad_parameter, "step sequence too short; increase n_max or shrink rho");

  std::vector<double> log_phi(rep.grid.size());
  for (std::size_t k = 0; k < rep.grid.size(); ++k) {
    const double v = phi(rep.grid[k]);
    if (!(v > 0.0) || !std::isfinite(v))
      raise(errc::non_positive_phi,
            "phi must be positive and finite on the step sequence");
    log_phi[k] = std::log(v);
  }
  rep.head_coeff = log_phi[0] / (rep.upper - rep.grid[0]);
  rep.interval_slope.resize(rep.grid.size() - 1);
  rep.max_abs_eps.resize(rep.grid.size() - 1);
  for (std::size_t k = 0; k + 1 < rep.grid.size(); ++k) {
    const double dx = rep.grid[k] - rep.grid[k + 1];
    rep.interval_slope[k] = (log_phi[k + 1] - log_phi[k]) / dx;
    double mx = 0.0;
    const int probes = 129;
    for (int q = 1; q < probes; ++q) {
      const double t = static_cast<double>(q) / probes;
      const double u = rep.grid[k] - t * dx;
      mx = std::max(mx, std::abs(rep.interval_slope[k] * density.pdf(t) * rho(u)));
    }
    rep.max_abs_eps[k] = mx;
  }
  // measured c(x) at the midpoint of the last interval:
  // c(x) = phi(x) / exp(int_x^upper eps/rho)
  {
    const std::size_t last = rep.grid.size() - 2;
    const double x_hi = rep.grid[last];
    const double x_lo = rep.grid[last + 1];
    const double xm = 0.5 * (x_hi + x_lo);
    auto integrand = [&](double u) { return rep.eps_at(u) / rho(u); };
    const double seg = integrate_adaptive(integrand, xm, x_hi, 1e-11, 1e-14, 20000).value;
    const double log_tail = seg + rep.log_phi_at_grid(last);
    rep.c_value = std::exp(std::log(phi(xm)) - log_tail);
  }
  return rep;
}

}  // namespace smallball
