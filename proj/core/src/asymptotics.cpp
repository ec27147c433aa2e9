#include "smallball/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "smallball/errors.hpp"

namespace smallball {

namespace {
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // log(2 pi)/2
}

SmallBallEstimate dmz_estimate(const EigenSpectrum& s, double epsilon, double rel_tol) {
  ThetaSolution sol = invert_mu(s, epsilon, std::max(epsilon * rel_tol, 1e-300));
  SeriesValue iv = eval_I(s, sol.theta);
  SeriesValue pv = eval_psi(s, sol.theta);
  SmallBallEstimate out;
  out.epsilon = epsilon;
  out.theta = sol.theta;
  out.I_value = iv.value;
  out.psi_value = pv.value;
  out.log_value = -iv.value - std::log(pv.value) - kHalfLog2Pi;
  out.value = std::exp(out.log_value);
  return out;
}

LogF make_dmz_logf(const EigenSpectrum& s, double rel_tol) {
  return [s, rel_tol](double x) { return dmz_estimate(s, x, rel_tol).log_value; };
}

ClosedFormFamily ClosedFormFamily::polynomial(double beta, double c1, double c2) {
  if (!(beta > 1.0) || !(c1 > 0.0) || !(c2 > 0.0))
    raise(errc::bad_parameter, "polynomial closed form requires beta > 1, C1 > 0, C2 > 0");
  ClosedFormFamily f;
  f.kind = Kind::polynomial;
  f.beta = beta;
  f.c1 = c1;
  f.c2 = c2;
  return f;
}

ClosedFormFamily ClosedFormFamily::exponential(double alpha) {
  if (!(alpha > 0.0)) raise(errc::bad_parameter, "exponential closed form requires alpha > 0");
  ClosedFormFamily f;
  f.kind = Kind::exponential;
  f.alpha = alpha;
  return f;
}

double closed_form_log_eval(const ClosedFormFamily& f, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) raise(errc::domain_error, "closed form requires s > 0");
  if (f.kind == ClosedFormFamily::Kind::polynomial) {
    const double inv = 1.0 / (f.beta - 1.0);
    return std::log(f.c1) - 0.5 * inv * std::log(s) - f.c2 * std::pow(s, -inv);
  }
  if (s >= 1.0)
    raise(errc::domain_error, "exponential closed form requires s < 1 so that -log s > 0");
  const double ls = std::log(s);
  return 0.5 * std::log(f.alpha / (-M_PI * ls)) - ls * ls / (4.0 * f.alpha);
}

double closed_form_eval(const ClosedFormFamily& f, double s) {
  return std::exp(closed_form_log_eval(f, s));
}

PolyConstantsFit calibrate_poly_constants(const EigenSpectrum& s, std::span<const double> eps_grid,
                                          double residual_threshold) {
  if (s.family() != EigenSpectrum::Family::polynomial)
    raise(errc::bad_parameter, "calibration targets the polynomial family");
  std::vector<double> grid(eps_grid.begin(), eps_grid.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.size() < 3)
    raise(errc::poor_fit, "calibration needs at least three distinct grid points");
  const double inv = 1.0 / (s.beta() - 1.0);
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  rows.reserve(grid.size());
  for (double eps : grid) {
    rows.push_back({1.0, std::log(eps), std::pow(eps, -inv)});
    y.push_back(dmz_estimate(s, eps).log_value);
  }
  double rms = 0.0;
  std::vector<double> b = least_squares(rows, y, &rms);
  PolyConstantsFit fit;
  fit.c1 = std::exp(b[0]);
  fit.prefactor_power = b[1];
  fit.c2 = -b[2];
  fit.residual = rms;
  if (!(fit.c2 > 0.0))
    raise(errc::poor_fit, "calibrated C2 is not positive; grid not in the asymptotic regime");
  if (rms > residual_threshold)
    raise(errc::poor_fit, "fit residual " + std::to_string(rms) + " above threshold");
  return fit;
}

double representation_log_eval(const AuxFunction& rho, double s, double c, double upper,
                               double quad_rel_tol) {
  if (!(c > 0.0)) raise(errc::bad_parameter, "representation constant must be positive");
  if (!(s > 0.0) || s > upper)
    raise(errc::domain_error, "representation requires 0 < s <= upper");
  if (upper > rho.s_max * (1.0 + 1e-12))
    raise(errc::domain_error, "rho is not evaluable up to the integral's upper limit");
  const double rho_s = rho(s);
  if (!(rho_s > 0.0)) raise(errc::domain_error, "rho must be positive at s");
  double integral = 0.0;
  if (s < upper) {
    // t = e^u tames the blow-up of 1/rho near zero
    auto integrand = [&rho](double u) {
      const double t = std::exp(u);
      const double r = rho.eval(t);
      if (!(r > 0.0)) raise(errc::domain_error, "rho must stay positive on the integral range");
      return t / r;
    };
    QuadratureResult q =
        integrate_adaptive(integrand, std::log(s), std::log(upper), quad_rel_tol, 0.0, 20000);
    integral = q.value;
  }
  return std::log(c) - integral - 2.0 * std::log(rho_s);
}

double representation_eval(const AuxFunction& rho, double s, double c, double upper,
                           double quad_rel_tol) {
  return std::exp(representation_log_eval(rho, s, c, upper, quad_rel_tol));
}

AuxFunction norm_transform(const AuxFunction& rho_f) {
  AuxFunction g;
  g.provenance = rho_f.provenance;
  g.s_max = std::sqrt(rho_f.s_max);
  auto inner = rho_f;  // copy keeps the transform self-contained
  g.eval = [inner](double s) { return inner(s * s) / (2.0 * s); };
  return g;
}

}  // namespace smallball
