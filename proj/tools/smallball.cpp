// Command-line driver: reproducible, file-based experiments over the library.
// Exit codes: 0 success, 2 configuration error, 3 compute error.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "smallball/asymptotics.hpp"
#include "smallball/errors.hpp"
#include "smallball/gamma_class.hpp"
#include "smallball/inversion.hpp"
#include "smallball/kernel_stats.hpp"
#include "smallball/oracle.hpp"
#include "smallball/series.hpp"
#include "smallball/spectrum.hpp"
#include "smallball/version.hpp"

namespace sb = smallball;
using nlohmann::json;

namespace {

struct Options {
  std::string command;
  std::string spectrum_path;
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

struct Output {
  std::vector<std::string> columns;
  std::vector<json> records;
  json meta = json::object();
};

std::string format_cell(const json& v) {
  char buf[64];
  if (v.is_number_float()) {
    double x = v.get<double>();
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::snprintf(buf, sizeof(buf), "%.16e", x);
    return buf;
  }
  if (v.is_number_integer()) {
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v.get<std::int64_t>()));
    return buf;
  }
  if (v.is_number_unsigned()) {
    std::snprintf(buf, sizeof(buf), "%llu",
                  static_cast<unsigned long long>(v.get<std::uint64_t>()));
    return buf;
  }
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "nan";
  return v.dump();
}

void write_output(const Output& out, const Options& opt, const json& resolved_config) {
  std::ostringstream body;
  if (opt.format == "csv") {
    body << "# smallball " << sb::kVersion << "\n";
    body << "# config " << resolved_config.dump() << "\n";
    if (!out.meta.empty()) body << "# meta " << out.meta.dump() << "\n";
    for (std::size_t c = 0; c < out.columns.size(); ++c)
      body << (c ? "," : "") << out.columns[c];
    body << "\n";
    for (const json& rec : out.records) {
      for (std::size_t c = 0; c < out.columns.size(); ++c) {
        body << (c ? "," : "");
        body << format_cell(rec.contains(out.columns[c]) ? rec.at(out.columns[c]) : json());
      }
      body << "\n";
    }
  } else {
    json doc;
    doc["tool"] = "smallball";
    doc["version"] = sb::kVersion;
    doc["config"] = resolved_config;
    if (!out.meta.empty()) doc["meta"] = out.meta;
    doc["records"] = out.records;
    body << doc.dump(2) << "\n";
  }
  if (opt.out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream f(opt.out_path, std::ios::binary);
    if (!f) sb::raise(sb::errc::config_error, "cannot open output path " + opt.out_path);
    f << body.str();
  }
}

json load_config(const Options& opt) {
  if (opt.config_path.empty()) return json::object();
  std::ifstream in(opt.config_path);
  if (!in) sb::raise(sb::errc::config_error, "cannot open config file " + opt.config_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    sb::raise(sb::errc::config_error, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) sb::raise(sb::errc::config_error, "config root must be a JSON object");
  return j;
}

std::vector<double> parse_grid(const json& cfg, const std::string& key) {
  if (!cfg.contains(key))
    sb::raise(sb::errc::config_error, "config requires \"" + key + "\"");
  const json& g = cfg.at(key);
  std::vector<double> out;
  if (g.is_array()) {
    out = g.get<std::vector<double>>();
  } else if (g.is_object()) {
    const double from = g.at("from").get<double>();
    const double to = g.at("to").get<double>();
    const int points = g.at("points").get<int>();
    const std::string scale = g.value("scale", "log");
    if (points < 1) sb::raise(sb::errc::config_error, "grid needs points >= 1");
    for (int i = 0; i < points; ++i) {
      const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
      out.push_back(scale == "log" ? from * std::pow(to / from, t) : from + t * (to - from));
    }
  } else {
    sb::raise(sb::errc::config_error, "grid \"" + key + "\" must be an array or range object");
  }
  if (out.empty()) sb::raise(sb::errc::config_error, "grid \"" + key + "\" is empty");
  for (double v : out)
    if (!std::isfinite(v)) sb::raise(sb::errc::config_error, "grid values must be finite");
  return out;
}

sb::TruncationPolicy parse_policy(const json& cfg) {
  sb::TruncationPolicy p;
  if (cfg.contains("max_terms")) p.max_terms = cfg.at("max_terms").get<std::size_t>();
  if (cfg.contains("tail_tolerance")) p.tail_tolerance = cfg.at("tail_tolerance").get<double>();
  return p;
}

const sb::EigenSpectrum& require_spectrum(const std::optional<sb::EigenSpectrum>& s) {
  if (!s)
    sb::raise(sb::errc::config_error, "this command requires --spectrum <file>");
  return *s;
}

sb::LogF make_logf(const json& cfg, const std::optional<sb::EigenSpectrum>& spectrum) {
  if (!cfg.contains("f")) sb::raise(sb::errc::config_error, "config requires an \"f\" source");
  const json& f = cfg.at("f");
  const std::string kind = f.value("kind", "");
  if (kind == "dmz") {
    const sb::EigenSpectrum& s = require_spectrum(spectrum);
    return sb::make_dmz_logf(s, f.value("rel_tol", 1e-10));
  }
  if (kind == "power") {
    const double c = f.value("c", 1.0);
    const double d = f.at("d").get<double>();
    return [c, d](double s) { return std::log(c) + d * std::log(s); };
  }
  if (kind == "exp-inverse") {
    const double k = f.value("k", 1.0);
    const double scale = f.value("scale", 1.0);
    return [k, scale](double s) { return -scale * std::pow(s, -k); };
  }
  if (kind == "closed-form-poly") {
    auto fam = sb::ClosedFormFamily::polynomial(f.at("beta").get<double>(),
                                                f.at("c1").get<double>(),
                                                f.at("c2").get<double>());
    return [fam](double s) { return sb::closed_form_log_eval(fam, s); };
  }
  if (kind == "closed-form-exp") {
    auto fam = sb::ClosedFormFamily::exponential(f.at("alpha").get<double>());
    return [fam](double s) { return sb::closed_form_log_eval(fam, s); };
  }
  sb::raise(sb::errc::config_error, "unknown f kind \"" + kind + "\"");
}

sb::AuxFunction make_rho_source(const json& cfg, const std::optional<sb::EigenSpectrum>& spectrum) {
  if (!cfg.contains("rho"))
    sb::raise(sb::errc::config_error, "config requires a \"rho\" source");
  const json& r = cfg.at("rho");
  const std::string kind = r.value("kind", "");
  if (kind == "inverted-mu") {
    const sb::EigenSpectrum& s = require_spectrum(spectrum);
    return sb::make_rho_aux(s, r.value("rel_tol", 1e-10));
  }
  if (kind == "power")
    return sb::make_power_aux(r.value("coeff", 1.0), r.at("exponent").get<double>(),
                              r.value("s_max", 1.0));
  if (kind == "log") return sb::make_log_aux(r.value("coeff", 1.0), r.value("s_max", 0.5));
  if (kind == "estimated-from-f")
    return sb::make_estimated_aux(make_logf(cfg, spectrum), r.value("s_max", 1.0),
                                  r.value("quad_tol", 1e-10));
  sb::raise(sb::errc::config_error, "unknown rho kind \"" + kind + "\"");
}

std::function<double(double)> make_phi_source(const json& cfg,
                                              const sb::AuxFunction& rho) {
  if (!cfg.contains("phi"))
    sb::raise(sb::errc::config_error, "config requires a \"phi\" source");
  const json& p = cfg.at("phi");
  const std::string kind = p.value("kind", "");
  if (kind == "one") return [](double) { return 1.0; };
  if (kind == "power") {
    const double c = p.value("coeff", 1.0);
    const double e = p.at("exponent").get<double>();
    return [c, e](double t) { return c * std::pow(t, e); };
  }
  if (kind == "from-rho") return [rho](double t) { return rho(t); };
  sb::raise(sb::errc::config_error, "unknown phi kind \"" + kind + "\"");
}

sb::KernelSpec make_kernel(const json& cfg) {
  if (!cfg.contains("kernel"))
    sb::raise(sb::errc::config_error, "config requires a \"kernel\"");
  const json& k = cfg.at("kernel");
  const std::string family = k.value("family", "");
  if (family == "uniform") return sb::KernelSpec::uniform();
  if (family == "truncated-linear")
    return sb::KernelSpec::truncated_linear(k.at("a").get<double>(), k.at("b").get<double>());
  if (family == "tabulated")
    return sb::KernelSpec::tabulated(k.at("s").get<std::vector<double>>(),
                                     k.at("k").get<std::vector<double>>());
  sb::raise(sb::errc::config_error, "unknown kernel family \"" + family + "\"");
}

std::uint64_t require_seed(const Options& opt, const json& cfg) {
  if (opt.seed) return *opt.seed;
  if (cfg.contains("seed")) return cfg.at("seed").get<std::uint64_t>();
  sb::raise(sb::errc::config_error,
            "stochastic commands require a seed (--seed or config \"seed\")");
}

// ---- command handlers ----

Output run_series(const std::string& which, const sb::EigenSpectrum& s, const json& cfg) {
  Output out;
  out.columns = {"theta", "value", "tail_error", "terms"};
  sb::TruncationPolicy pol = parse_policy(cfg);
  for (double theta : parse_grid(cfg, "theta_grid")) {
    sb::SeriesValue v;
    if (which == "mu")
      v = sb::eval_mu(s, theta, pol);
    else if (which == "psi")
      v = sb::eval_psi(s, theta, pol);
    else
      v = sb::eval_I(s, theta, pol);
    out.records.push_back({{"theta", theta},
                           {"value", v.value},
                           {"tail_error", v.tail_error},
                           {"terms", v.terms_used}});
  }
  return out;
}

Output run_invert(const sb::EigenSpectrum& s, const json& cfg) {
  Output out;
  out.columns = {"epsilon", "theta", "residual", "iterations"};
  const double rel_tol = cfg.value("rel_tol", 1e-10);
  for (double eps : parse_grid(cfg, "epsilon_grid")) {
    sb::ThetaSolution sol = sb::invert_mu(s, eps, std::max(eps * rel_tol, 1e-300));
    out.records.push_back({{"epsilon", eps},
                           {"theta", sol.theta},
                           {"residual", sol.residual},
                           {"iterations", sol.iterations}});
  }
  return out;
}

Output run_rho(const sb::EigenSpectrum& s, const json& cfg) {
  Output out;
  out.columns = {"s", "rho", "theta"};
  const double rel_tol = cfg.value("rel_tol", 1e-10);
  for (double x : parse_grid(cfg, "s_grid")) {
    const double rho = sb::eval_rho(s, x, rel_tol);
    out.records.push_back({{"s", x}, {"rho", rho}, {"theta", 1.0 / rho}});
  }
  return out;
}

Output run_estimate(const sb::EigenSpectrum& s, const json& cfg) {
  Output out;
  out.columns = {"epsilon", "theta", "I", "psi", "log_value", "value"};
  const double rel_tol = cfg.value("rel_tol", 1e-10);
  for (double eps : parse_grid(cfg, "epsilon_grid")) {
    sb::SmallBallEstimate e = sb::dmz_estimate(s, eps, rel_tol);
    out.records.push_back({{"epsilon", e.epsilon},
                           {"theta", e.theta},
                           {"I", e.I_value},
                           {"psi", e.psi_value},
                           {"log_value", e.log_value},
                           {"value", e.value}});
  }
  return out;
}

json oracle_record(const sb::OracleEstimate& e) {
  return {{"epsilon", e.epsilon},
          {"method", sb::method_name(e.method)},
          {"estimate", e.estimate},
          {"log_estimate", e.log_estimate},
          {"std_error", e.std_error},
          {"bracket_lo", e.bracket.lo},
          {"bracket_hi", e.bracket.hi},
          {"terms", e.terms},
          {"samples", e.samples},
          {"seed", e.seed}};
}

Output run_oracle(const sb::EigenSpectrum& s, const json& cfg, const Options& opt) {
  Output out;
  out.columns = {"epsilon", "method",     "estimate", "log_estimate", "std_error",
                 "bracket_lo", "bracket_hi", "terms",  "samples",      "seed"};
  const std::string method = cfg.value("method", "mc-tilted");
  const std::size_t terms = cfg.value("terms", std::size_t{10000});
  const bool with_bracket = cfg.value("bracket", false);
  const double quad_tol = cfg.value("quad_tol", 1e-10);
  std::vector<double> eps_grid = parse_grid(cfg, "epsilon_grid");

  for (double eps : eps_grid) {
    sb::OracleEstimate est;
    if (method == "cf-inversion") {
      est = sb::cf_inversion_cdf(s, eps, terms, quad_tol);
      if (with_bracket)
        est.bracket = sb::truncation_bracket(s, eps, terms, [&](double x) {
          auto inner = sb::cf_inversion_cdf(s, x, terms, quad_tol);
          return sb::PointEstimate{inner.estimate, quad_tol};
        });
    } else if (method == "mc-plain" || method == "mc-tilted") {
      const std::uint64_t seed = require_seed(opt, cfg);
      const std::size_t samples = cfg.value("samples", std::size_t{100000});
      const bool tilted = method == "mc-tilted";
      if (with_bracket) {
        // one pass over shared samples for epsilon and all bracket probes
        const double tail_hi = s.tail_sum_bounds(terms).hi;
        std::vector<double> probes = sb::bracket_delta_grid(eps, tail_hi);
        std::vector<double> thresholds{eps};
        for (double d : probes) thresholds.push_back(eps - d);
        std::vector<sb::McPoint> pts = sb::mc_cdf_multi(s, thresholds, eps, terms, samples,
                                                        seed, tilted, opt.threads);
        est.epsilon = eps;
        est.method = tilted ? sb::OracleEstimate::Method::mc_tilted
                            : sb::OracleEstimate::Method::mc_plain;
        est.estimate = pts[0].estimate;
        est.log_estimate = pts[0].log_estimate;
        est.std_error = pts[0].std_error;
        est.terms = terms;
        est.samples = samples;
        est.seed = seed;
        auto lookup = [&](double x) -> sb::PointEstimate {
          for (const auto& p : pts)
            if (p.epsilon == x) return {p.estimate, p.std_error};
          sb::raise(sb::errc::bad_parameter, "bracket probe missing from the threshold pass");
        };
        est.bracket = sb::truncation_bracket(s, eps, terms, lookup);
      } else {
        est = tilted ? sb::mc_tilted_cdf(s, eps, terms, samples, seed, opt.threads)
                     : sb::mc_plain_cdf(s, eps, terms, samples, seed, opt.threads);
      }
    } else {
      sb::raise(sb::errc::config_error, "unknown oracle method \"" + method + "\"");
    }
    out.records.push_back(oracle_record(est));
  }
  return out;
}

void fill_check_output(Output& out, const sb::GammaCheckReport& rep) {
  out.columns = {"s", "x", "ratio", "target", "rel_error", "max_rel_error_at_s"};
  for (std::size_t i = 0; i < rep.s_grid.size(); ++i)
    for (std::size_t j = 0; j < rep.x_grid.size(); ++j)
      out.records.push_back({{"s", rep.s_grid[i]},
                             {"x", rep.x_grid[j]},
                             {"ratio", rep.ratios[i][j]},
                             {"target", rep.targets[j]},
                             {"rel_error", std::abs(rep.ratios[i][j] / rep.targets[j] - 1.0)},
                             {"max_rel_error_at_s", rep.max_rel_error[i]}});
  out.meta["verdict"] = sb::verdict_name(rep.verdict);
  out.meta["threshold"] = rep.threshold;
  out.meta["max_rel_error"] = rep.max_rel_error;
}

Output run_gamma_check(const std::optional<sb::EigenSpectrum>& s, const json& cfg) {
  Output out;
  sb::LogF logf = make_logf(cfg, s);
  sb::AuxFunction rho = make_rho_source(cfg, s);
  std::vector<double> s_grid = parse_grid(cfg, "s_grid");
  std::vector<double> x_grid = parse_grid(cfg, "x_grid");
  auto rep = sb::gamma_membership_check(logf, rho, s_grid, x_grid, cfg.value("threshold", 0.05));
  fill_check_output(out, rep);
  return out;
}

Output run_self_neglect(const std::optional<sb::EigenSpectrum>& s, const json& cfg) {
  Output out;
  sb::AuxFunction rho = make_rho_source(cfg, s);
  std::vector<double> s_grid = parse_grid(cfg, "s_grid");
  std::vector<double> x_grid = parse_grid(cfg, "x_grid");
  auto rep = sb::self_neglect_check(rho, s_grid, x_grid, cfg.value("threshold", 0.05));
  fill_check_output(out, rep);
  return out;
}

Output run_aux_estimate(const std::optional<sb::EigenSpectrum>& s, const json& cfg) {
  Output out;
  out.columns = {"s", "rho_estimate"};
  sb::LogF logf = make_logf(cfg, s);
  const double quad_tol = cfg.value("quad_tol", 1e-10);
  for (double x : parse_grid(cfg, "s_grid"))
    out.records.push_back({{"s", x}, {"rho_estimate", sb::estimate_aux(logf, x, quad_tol)}});
  return out;
}

Output run_reconstruct(const std::optional<sb::EigenSpectrum>& s, const json& cfg) {
  Output out;
  out.columns = {"i", "a", "a_squared"};
  sb::AuxFunction rho = make_rho_source(cfg, s);
  const double c = cfg.value("C", 1.0);
  const std::size_t i_max = cfg.value("i_max", std::size_t{1000});
  sb::EigenSpectrum rec = sb::reconstruct_spectrum(rho, c, i_max);
  for (std::size_t i = 1; i <= rec.values().size(); ++i) {
    const double a = rec.values()[i - 1];
    out.records.push_back({{"i", i}, {"a", a}, {"a_squared", a * a}});
  }
  out.meta["spectrum"] = json::parse(sb::spectrum_to_json(rec));
  return out;
}

Output run_repr2(const std::optional<sb::EigenSpectrum>& s, const json& cfg) {
  Output out;
  out.columns = {"n", "x_n", "interval_slope", "max_abs_eps", "log_phi_identity"};
  sb::AuxFunction rho = make_rho_source(cfg, s);
  auto phi = make_phi_source(cfg, rho);
  const double x0 = cfg.value("x0", 0.5);
  const std::size_t n_max = cfg.value("n_max", std::size_t{60});
  sb::SelfNeglectRepr rep = sb::build_self_neglect_repr(phi, rho, x0, sb::bump_density(), n_max);
  for (std::size_t n = 0; n < rep.grid.size(); ++n) {
    json rec{{"n", n},
             {"x_n", rep.grid[n]},
             {"log_phi_identity", rep.log_phi_at_grid(n)}};
    rec["interval_slope"] = n + 1 < rep.grid.size() ? json(rep.interval_slope[n]) : json();
    rec["max_abs_eps"] = n + 1 < rep.grid.size() ? json(rep.max_abs_eps[n]) : json();
    out.records.push_back(rec);
  }
  out.meta["c_value"] = rep.c_value;
  out.meta["head_coeff"] = rep.head_coeff;
  out.meta["upper"] = rep.upper;
  return out;
}

Output run_kernel(const std::optional<sb::EigenSpectrum>& s, const json& cfg) {
  Output out;
  out.columns = {"h", "expectation", "log_value", "ratio_to_K1F"};
  sb::LogF logf = make_logf(cfg, s);
  sb::KernelSpec kernel = make_kernel(cfg);
  if (sb::validate_kernel(kernel))
    std::cerr << "warning: kernel has K(1) = 0; the leading term of the expectation vanishes\n";
  const double quad_tol = cfg.value("quad_tol", 1e-9);
  for (double h : parse_grid(cfg, "h_grid")) {
    sb::KernelExpectation e = sb::kernel_expectation(logf, kernel, h, quad_tol);
    out.records.push_back({{"h", h},
                           {"expectation", e.value},
                           {"log_value", e.log_value},
                           {"ratio_to_K1F", e.ratio_to_k1f}});
  }
  return out;
}

int run(const Options& opt) {
  json cfg = load_config(opt);
  std::optional<sb::EigenSpectrum> spectrum;
  if (!opt.spectrum_path.empty()) spectrum = sb::load_spectrum_file(opt.spectrum_path);

  json resolved;
  resolved["command"] = opt.command;
  resolved["config"] = cfg;
  resolved["format"] = opt.format;
  if (spectrum) resolved["spectrum"] = json::parse(sb::spectrum_to_json(*spectrum));
  if (opt.seed) resolved["seed"] = *opt.seed;

  Output out;
  const std::string& c = opt.command;
  if (c == "mu" || c == "psi" || c == "I")
    out = run_series(c, require_spectrum(spectrum), cfg);
  else if (c == "invert")
    out = run_invert(require_spectrum(spectrum), cfg);
  else if (c == "rho")
    out = run_rho(require_spectrum(spectrum), cfg);
  else if (c == "estimate")
    out = run_estimate(require_spectrum(spectrum), cfg);
  else if (c == "oracle")
    out = run_oracle(require_spectrum(spectrum), cfg, opt);
  else if (c == "gamma-check")
    out = run_gamma_check(spectrum, cfg);
  else if (c == "self-neglect")
    out = run_self_neglect(spectrum, cfg);
  else if (c == "aux-estimate")
    out = run_aux_estimate(spectrum, cfg);
  else if (c == "reconstruct")
    out = run_reconstruct(spectrum, cfg);
  else if (c == "repr2")
    out = run_repr2(spectrum, cfg);
  else if (c == "kernel")
    out = run_kernel(spectrum, cfg);
  else
    sb::raise(sb::errc::config_error, "unknown command \"" + c + "\"");

  write_output(out, opt, resolved);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Gaussian small-ball probabilities in l2: series, saddlepoint estimates, "
               "Gamma-class checks and simulation oracles"};
  app.require_subcommand(1);

  static const std::vector<std::pair<std::string, std::string>> kCommands = {
      {"mu", "table of mu(theta) over a theta grid"},
      {"psi", "table of psi(theta) over a theta grid"},
      {"I", "table of I(theta) over a theta grid"},
      {"invert", "saddlepoint theta(epsilon) table"},
      {"rho", "auxiliary function rho(s) = 1/theta(s) table"},
      {"estimate", "small-ball saddlepoint estimate table (log space)"},
      {"oracle", "ground-truth CDF of the truncated squared norm (MC or CF inversion)"},
      {"gamma-check", "membership check F(s+x rho(s))/F(s) -> e^x"},
      {"self-neglect", "self-neglect check rho(s+x rho(s))/rho(s) -> 1"},
      {"aux-estimate", "auxiliary-function estimator int_0^s F / F(s)"},
      {"reconstruct", "spectrum a_i^2 = C phi^{-1}(i) from an auxiliary function"},
      {"repr2", "piecewise representation of a rho-self-neglecting function"},
      {"kernel", "kernel-smoothed expectation from a small-ball CDF"},
  };
  for (const auto& [name, help] : kCommands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();  // global flags may appear after the command
    sub->callback([&opt, name = name]() { opt.command = name; });
  }
  app.add_option("--spectrum", opt.spectrum_path, "spectrum descriptor JSON file");
  app.add_option("--config", opt.config_path, "experiment config JSON file");
  app.add_option("--out", opt.out_path, "output path (default: stdout)");
  app.add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "RNG seed for stochastic commands");
  app.add_option("--threads", opt.threads,
                 "worker threads for Monte Carlo (never changes results)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (seed_opt->count() > 0) opt.seed = seed_value;

  try {
    return run(opt);
  } catch (const sb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == sb::errc::config_error ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
