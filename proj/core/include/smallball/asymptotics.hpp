#pragma once

#include <span>
#include <vector>

#include "smallball/inversion.hpp"
#include "smallball/numeric.hpp"
#include "smallball/spectrum.hpp"

namespace smallball {

/// Small-deviation estimate exp(-I(theta))/(sqrt(2 pi) psi(theta)) at the saddlepoint
/// mu(theta) = epsilon. log_value is always finite; value may underflow to zero.
struct SmallBallEstimate {
  double epsilon = 0.0;
  double theta = 0.0;
  double I_value = 0.0;
  double psi_value = 0.0;
  double value = 0.0;
  double log_value = 0.0;
};

/// Dembo/Meyer-Wolf/Zeitouni saddlepoint estimate of P(z < epsilon).
/// rel_tol scales the residual target of the inner inversion by epsilon.
SmallBallEstimate dmz_estimate(const EigenSpectrum& s, double epsilon, double rel_tol = 1e-10);

/// log F-hat as a reusable log-space evaluator (for membership checks, kernels, probes).
LogF make_dmz_logf(const EigenSpectrum& s, double rel_tol = 1e-10);

/// The two closed-form asymptotic families:
/// polynomial: C1 s^{-1/(2 beta - 2)} exp(-C2 s^{-1/(beta-1)})
/// exponential: sqrt(alpha / (-pi log s)) exp(-(log s)^2 / (4 alpha)), s in (0,1)
struct ClosedFormFamily {
  enum class Kind { polynomial, exponential };
  Kind kind = Kind::polynomial;
  double beta = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double alpha = 0.0;

  static ClosedFormFamily polynomial(double beta, double c1, double c2);
  static ClosedFormFamily exponential(double alpha);
};

double closed_form_log_eval(const ClosedFormFamily& f, double s);
double closed_form_eval(const ClosedFormFamily& f, double s);

/// Least-squares calibration of log dmz_estimate against {1, log s, s^{-1/(beta-1)}}.
struct PolyConstantsFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double prefactor_power = 0.0;  // fitted coefficient of log s
  double residual = 0.0;         // rms residual of the fit in log space
};
PolyConstantsFit calibrate_poly_constants(const EigenSpectrum& s, std::span<const double> eps_grid,
                                          double residual_threshold = 0.05);

/// C exp(-int_s^upper dt/rho(t)) / rho(s)^2 evaluated by adaptive quadrature in
/// logarithmic time. The upper limit of the integral defaults to 1.
double representation_log_eval(const AuxFunction& rho, double s, double c, double upper = 1.0,
                               double quad_rel_tol = 1e-9);
double representation_eval(const AuxFunction& rho, double s, double c, double upper = 1.0,
                           double quad_rel_tol = 1e-9);

/// Auxiliary function of G(s) = F(s^2): rho_G(s) = rho_F(s^2) / (2 s).
AuxFunction norm_transform(const AuxFunction& rho_f);

}  // namespace smallball
