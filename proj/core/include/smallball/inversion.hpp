#pragma once

#include <functional>

#include "smallball/series.hpp"
#include "smallball/spectrum.hpp"

namespace smallball {

/// Solved saddlepoint equation mu(theta) = epsilon.
struct ThetaSolution {
  double epsilon = 0.0;
  double theta = 0.0;
  double residual = 0.0;  // |mu(theta) - epsilon|
  int iterations = 0;
};

/// mu(0) = sum 1/a_i^2.
double mu_at_zero(const EigenSpectrum& s, const TruncationPolicy& policy = {});

/// Solve mu(theta) = epsilon for the unique theta >= 0.
/// tol is the absolute residual target on mu; the series is evaluated to tol/10.
/// Requires 0 < epsilon < mu(0).
ThetaSolution invert_mu(const EigenSpectrum& s, double epsilon, double tol,
                        const TruncationPolicy& policy = {});

/// Auxiliary function rho(x) = 1/mu^{-1}(x) evaluated at x in (0, mu(0)).
/// rel_tol controls the residual of the inner inversion relative to x.
double eval_rho(const EigenSpectrum& s, double x, double rel_tol = 1e-10);

/// phi(t) = t mu(t), nondecreasing and concave, phi(0) = 0, phi -> inf.
double eval_phi(const EigenSpectrum& s, double t, const TruncationPolicy& policy = {});

/// Generalized inverse of phi: the t >= 0 with |phi(t) - y| <= tol.
double invert_phi(const EigenSpectrum& s, double y, double tol,
                  const TruncationPolicy& policy = {});

/// An evaluable auxiliary function with provenance and a domain cap.
struct AuxFunction {
  enum class Provenance { inverted_mu, closed_form, estimated_from_f };

  std::function<double(double)> eval;
  Provenance provenance = Provenance::closed_form;
  double s_max = 1.0;

  /// Evaluates rho(s); raises DomainError outside (0, s_max].
  double operator()(double s) const;
};

/// rho backed by saddlepoint inversion of this spectrum; domain capped just below mu(0).
AuxFunction make_rho_aux(const EigenSpectrum& s, double rel_tol = 1e-10);

/// rho(t) = coeff * t^exponent.
AuxFunction make_power_aux(double coeff, double exponent, double s_max = 1.0);

/// rho(t) = -coeff * t / log(t), defined for t in (0, s_max], s_max < 1.
AuxFunction make_log_aux(double coeff, double s_max = 0.5);

const char* provenance_name(AuxFunction::Provenance p) noexcept;

}  // namespace smallball
