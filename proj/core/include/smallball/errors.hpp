#pragma once

#include <stdexcept>
#include <string>

namespace smallball {

/// Error categories surfaced by the library. The CLI maps config_error to
/// exit code 2 and everything else to exit code 3.
enum class errc {
  bad_parameter,
  not_monotone,
  non_summable,
  no_tail_model,
  tolerance_unreachable,
  domain_error,
  out_of_range,
  no_convergence,
  quadrature_failure,
  underflow_regime,
  degenerate_tilt,
  vacuous_bracket,
  not_regularly_varying,
  leaves_domain,
  non_positive_phi,
  poor_fit,
  config_error,
};

inline const char* errc_name(errc c) noexcept {
  switch (c) {
    case errc::bad_parameter: return "BadParameter";
    case errc::not_monotone: return "NotMonotone";
    case errc::non_summable: return "NonSummable";
    case errc::no_tail_model: return "NoTailModel";
    case errc::tolerance_unreachable: return "ToleranceUnreachable";
    case errc::domain_error: return "DomainError";
    case errc::out_of_range: return "OutOfRange";
    case errc::no_convergence: return "NoConvergence";
    case errc::quadrature_failure: return "QuadratureFailure";
    case errc::underflow_regime: return "UnderflowRegime";
    case errc::degenerate_tilt: return "DegenerateTilt";
    case errc::vacuous_bracket: return "VacuousBracket";
    case errc::not_regularly_varying: return "NotRegularlyVarying";
    case errc::leaves_domain: return "LeavesDomain";
    case errc::non_positive_phi: return "NonPositivePhi";
    case errc::poor_fit: return "PoorFit";
    case errc::config_error: return "ConfigError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace smallball
