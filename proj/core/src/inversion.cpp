#include "smallball/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smallball/errors.hpp"
#include "smallball/numeric.hpp"

namespace smallball {

double mu_at_zero(const EigenSpectrum& s, const TruncationPolicy& policy) {
  return eval_mu(s, 0.0, policy).value;
}

ThetaSolution invert_mu(const EigenSpectrum& s, double epsilon, double tol,
                        const TruncationPolicy& policy) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0)
    raise(errc::out_of_range, "epsilon must lie in (0, mu(0))");
  if (!(tol > 0.0)) raise(errc::bad_parameter, "tolerance must be positive");

  TruncationPolicy inner = policy;
  const double mu0 = mu_at_zero(s, policy);
  if (epsilon >= mu0)
    raise(errc::out_of_range, "epsilon must lie below mu(0) = " + std::to_string(mu0));
  // inversion error must dominate series error; the floor keeps the request above
  // what double-precision summation can certify
  inner.tail_tolerance =
      std::max(std::min(policy.tail_tolerance, (tol / 10.0) / std::max(1.0, mu0)), 5e-16);

  int evals = 0;
  auto mu = [&](double theta) {
    ++evals;
    return eval_mu(s, theta, inner).value;
  };

  // bracket by doubling
  double lo = 0.0, f_lo = mu0 - epsilon;
  double hi = 1.0, f_hi = mu(1.0) - epsilon;
  if (std::abs(f_hi) <= tol) return {epsilon, hi, std::abs(f_hi), evals};
  int guard = 0;
  while (f_hi > 0.0) {
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    f_hi = mu(hi) - epsilon;
    if (std::abs(f_hi) <= tol) return {epsilon, hi, std::abs(f_hi), evals};
    if (++guard > 1100) raise(errc::no_convergence, "failed to bracket the saddlepoint");
  }

  // hybrid log-log secant / bisection inside the bracket; mu is strictly decreasing
  for (int it = 0; it < 200; ++it) {
    double mid;
    if (lo > 0.0 && f_lo + epsilon > 0.0 && f_hi + epsilon > 0.0) {
      // secant in (log theta, log mu) coordinates, clamped to the interior
      const double la = std::log(lo), lb = std::log(hi);
      const double ga = std::log(f_lo + epsilon), gb = std::log(f_hi + epsilon);
      const double ge = std::log(epsilon);
      double lx = (gb == ga) ? 0.5 * (la + lb) : la + (ge - ga) * (lb - la) / (gb - ga);
      const double margin = 0.05 * (lb - la);
      lx = std::clamp(lx, la + margin, lb - margin);
      mid = std::exp(lx);
      if (it % 3 == 2) mid = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    } else {
      mid = 0.5 * (lo + hi);
    }
    const double f_mid = mu(mid) - epsilon;
    if (std::abs(f_mid) <= tol) return {epsilon, mid, std::abs(f_mid), evals};
    if (f_mid > 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
    if (hi - lo <= 1e-15 * hi) {
      // theta pinned to machine resolution; accept the better endpoint
      const bool pick_lo = std::abs(f_lo) < std::abs(f_hi);
      const double theta = pick_lo ? lo : hi;
      const double res = std::abs(pick_lo ? f_lo : f_hi);
      if (res <= tol * 100.0) return {epsilon, theta, res, evals};
      raise(errc::no_convergence, "saddlepoint bracket collapsed before meeting tolerance");
    }
  }
  raise(errc::no_convergence, "saddlepoint iteration cap reached");
}

double eval_rho(const EigenSpectrum& s, double x, double rel_tol) {
  ThetaSolution sol = invert_mu(s, x, std::max(x * rel_tol, 1e-300));
  return 1.0 / sol.theta;
}

double eval_phi(const EigenSpectrum& s, double t, const TruncationPolicy& policy) {
  if (!std::isfinite(t) || t < 0.0) raise(errc::domain_error, "phi requires t >= 0");
  if (t == 0.0) return 0.0;
  return t * eval_mu(s, t, policy).value;
}

double invert_phi(const EigenSpectrum& s, double y, double tol, const TruncationPolicy& policy) {
  if (!std::isfinite(y) || y < 0.0) raise(errc::out_of_range, "phi inverse requires y >= 0");
  if (!(tol > 0.0)) raise(errc::bad_parameter, "tolerance must be positive");
  if (y == 0.0) return 0.0;
  auto phi = [&](double t) { return eval_phi(s, t, policy); };
  double lo = 0.0, f_lo = -y;
  double hi = 1.0, f_hi = phi(hi) - y;
  int guard = 0;
  while (f_hi < 0.0) {
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    if (std::isinf(hi)) raise(errc::out_of_range, "requested value beyond sup phi");
    f_hi = phi(hi) - y;
    if (++guard > 1100) raise(errc::out_of_range, "requested value beyond sup phi");
  }
  RootResult r = find_root_bracketed([&](double t) { return phi(t) - y; }, lo, hi, f_lo, f_hi,
                                     tol, 1e-14, 300);
  return r.x;
}

double AuxFunction::operator()(double s) const {
  if (!std::isfinite(s) || s <= 0.0 || s > s_max)
    raise(errc::domain_error,
          "auxiliary function evaluated outside (0, " + std::to_string(s_max) + "]");
  return eval(s);
}

AuxFunction make_rho_aux(const EigenSpectrum& s, double rel_tol) {
  const double mu0 = mu_at_zero(s);
  AuxFunction aux;
  aux.provenance = AuxFunction::Provenance::inverted_mu;
  aux.s_max = mu0 * (1.0 - 1e-9);
  aux.eval = [s, rel_tol](double x) { return eval_rho(s, x, rel_tol); };
  return aux;
}

AuxFunction make_power_aux(double coeff, double exponent, double s_max) {
  if (!(coeff > 0.0)) raise(errc::bad_parameter, "power auxiliary needs a positive coefficient");
  AuxFunction aux;
  aux.provenance = AuxFunction::Provenance::closed_form;
  aux.s_max = s_max;
  aux.eval = [coeff, exponent](double t) { return coeff * std::pow(t, exponent); };
  return aux;
}

AuxFunction make_log_aux(double coeff, double s_max) {
  if (!(coeff > 0.0)) raise(errc::bad_parameter, "log auxiliary needs a positive coefficient");
  if (!(s_max < 1.0)) raise(errc::bad_parameter, "log auxiliary requires s_max < 1");
  AuxFunction aux;
  aux.provenance = AuxFunction::Provenance::closed_form;
  aux.s_max = s_max;
  aux.eval = [coeff](double t) { return -coeff * t / std::log(t); };
  return aux;
}

const char* provenance_name(AuxFunction::Provenance p) noexcept {
  switch (p) {
    case AuxFunction::Provenance::inverted_mu: return "inverted-mu";
    case AuxFunction::Provenance::closed_form: return "closed-form";
    case AuxFunction::Provenance::estimated_from_f: return "estimated-from-F";
  }
  return "unknown";
}

}  // namespace smallball
