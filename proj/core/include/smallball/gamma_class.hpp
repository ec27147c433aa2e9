#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "smallball/inversion.hpp"
#include "smallball/numeric.hpp"
#include "smallball/spectrum.hpp"

namespace smallball {

/// Grid report for the limit checks F(s + x rho(s))/F(s) -> e^x (membership)
/// and rho(s + x rho(s))/rho(s) -> 1 (self-neglect).
struct GammaCheckReport {
  enum class Verdict { pass, fail, inconclusive };

  std::vector<double> s_grid;  // decreasing
  std::vector<double> x_grid;
  std::vector<std::vector<double>> ratios;  // [s][x]
  std::vector<double> targets;              // e^x or all-ones
  std::vector<double> max_rel_error;        // per s
  double threshold = 0.05;
  Verdict verdict = Verdict::inconclusive;
};

const char* verdict_name(GammaCheckReport::Verdict v) noexcept;

/// Trend test of the defining limit of the Gamma-class at zero. F is supplied in
/// log space; arguments s + x rho(s) <= 0 score ratio 0 (F vanishes there).
/// Pass requires the worst relative error to improve strictly over the last
/// three s points and to end at or below threshold.
GammaCheckReport gamma_membership_check(const LogF& log_f, const AuxFunction& rho,
                                        std::span<const double> s_grid,
                                        std::span<const double> x_grid, double threshold = 0.05);

/// Same trend test for the self-neglect property of rho itself.
GammaCheckReport self_neglect_check(const AuxFunction& rho, std::span<const double> s_grid,
                                    std::span<const double> x_grid, double threshold = 0.05);

/// Auxiliary-function estimator int_0^s F(t) dt / F(s), evaluated stably as
/// int_0^s exp(log F(t) - log F(s)) dt.
double estimate_aux(const LogF& log_f, double s, double quad_tol = 1e-10);

/// AuxFunction wrapper around estimate_aux with provenance estimated-from-F.
AuxFunction make_estimated_aux(const LogF& log_f, double s_max, double quad_tol = 1e-10);

/// Table of F(s)/s^p in log space for p = 0..p_max.
struct FlatnessRow {
  int p = 0;
  std::vector<double> log_ratio;  // log F(s_k) - p log s_k along the s grid
  bool decreasing = false;        // strictly decreasing along the (decreasing) grid
};
std::vector<FlatnessRow> flatness_probe(const LogF& log_f, int p_max,
                                        std::span<const double> s_grid);

/// Converse construction: spectrum a_i^2 = C phi^{-1}(i) with mu = (1/rho)^{-1},
/// phi(t) = t mu(t). rho must be regularly varying with rho(s)/s -> 0; a power-law
/// tail certificate is fitted from the last decade of the list.
EigenSpectrum reconstruct_spectrum(const AuxFunction& rho, double c, std::size_t i_max);

/// x_n = x_{n-1} - rho(x_{n-1}); strictly decreasing, stays positive.
std::vector<double> step_sequence(const AuxFunction& rho, double x0, std::size_t n_max,
                                  double floor = 0.0);

/// Smooth probability density on [0, 1].
struct SmoothDensity {
  std::function<double(double)> pdf;
  std::string name;
};

/// Normalized bump exp(-1/(t(1-t))) on (0,1); vanishes with all derivatives at 0 and 1.
SmoothDensity bump_density();

/// Piecewise representation phi(x) = c(x) exp( int_x^upper eps(u)/rho(u) du ) built on
/// the step sequence; the construction identity holds exactly at every grid point.
struct SelfNeglectRepr {
  std::vector<double> grid;             // x_0 > x_1 > ... > x_n
  std::vector<double> interval_slope;   // (log phi(x_{k+1}) - log phi(x_k)) / (x_k - x_{k+1})
  std::vector<double> max_abs_eps;      // sup |eps| on [x_{k+1}, x_k]
  double head_coeff = 0.0;              // eps = head_coeff * rho on [x_0, upper]
  double upper = 1.0;
  double c_value = 1.0;                 // measured limit of c(x)
  AuxFunction rho;
  SmoothDensity density;

  double eps_at(double u) const;
  /// log phi(x_k) implied by the construction (exact telescoping identity).
  double log_phi_at_grid(std::size_t k) const;
};

SelfNeglectRepr build_self_neglect_repr(const std::function<double(double)>& phi,
                                        const AuxFunction& rho, double x0,
                                        const SmoothDensity& density, std::size_t n_max);

}  // namespace smallball
