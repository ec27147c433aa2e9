#include <fstream>
#include <sstream>

#include "json.hpp"
#include "smallball/errors.hpp"
#include "smallball/spectrum.hpp"

namespace smallball {

namespace {

using nlohmann::json;

TailModel tail_from_json(const json& j) {
  std::string kind = j.value("kind", "none");
  if (kind == "none") return TailModel::none();
  if (kind == "geometric") {
    if (!j.contains("ratio")) raise(errc::config_error, "geometric tail requires \"ratio\"");
    return TailModel::geometric(j.at("ratio").get<double>());
  }
  if (kind == "power") {
    if (!j.contains("exponent")) raise(errc::config_error, "power tail requires \"exponent\"");
    double p = j.at("exponent").get<double>();
    if (j.contains("coeff_hi"))
      return TailModel::power_envelope(p, j.value("coeff_lo", 0.0), j.at("coeff_hi").get<double>());
    return TailModel::power(p);
  }
  raise(errc::config_error, "unknown tail kind \"" + kind + "\"");
}

EigenSpectrum from_json(const json& j) {
  if (!j.contains("family")) raise(errc::config_error, "spectrum descriptor requires \"family\"");
  std::string family = j.at("family").get<std::string>();
  std::string desc = j.value("description", "");
  if (family == "polynomial") {
    if (!j.contains("beta")) raise(errc::config_error, "polynomial spectrum requires \"beta\"");
    return EigenSpectrum::polynomial(j.at("beta").get<double>(), desc);
  }
  if (family == "exponential") {
    if (!j.contains("alpha")) raise(errc::config_error, "exponential spectrum requires \"alpha\"");
    return EigenSpectrum::exponential(j.at("alpha").get<double>(), desc);
  }
  if (family == "explicit") {
    if (!j.contains("values")) raise(errc::config_error, "explicit spectrum requires \"values\"");
    std::vector<double> values = j.at("values").get<std::vector<double>>();
    TailModel tail = j.contains("tail") ? tail_from_json(j.at("tail")) : TailModel::none();
    return EigenSpectrum::explicit_list(std::move(values), tail, desc);
  }
  raise(errc::config_error, "unknown spectrum family \"" + family + "\"");
}

}  // namespace

EigenSpectrum parse_spectrum_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    raise(errc::config_error, std::string("spectrum descriptor is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

EigenSpectrum load_spectrum_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::config_error, "cannot open spectrum file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spectrum_json(ss.str());
}

std::string spectrum_to_json(const EigenSpectrum& s) {
  json j;
  switch (s.family()) {
    case EigenSpectrum::Family::polynomial:
      j["family"] = "polynomial";
      j["beta"] = s.beta();
      break;
    case EigenSpectrum::Family::exponential:
      j["family"] = "exponential";
      j["alpha"] = s.alpha();
      break;
    case EigenSpectrum::Family::explicit_list: {
      j["family"] = "explicit";
      j["values"] = s.values();
      const TailModel& t = s.tail_model();
      json jt;
      switch (t.kind) {
        case TailModel::Kind::none:
          jt["kind"] = "none";
          break;
        case TailModel::Kind::geometric:
          jt["kind"] = "geometric";
          jt["ratio"] = t.ratio;
          break;
        case TailModel::Kind::power:
          jt["kind"] = "power";
          jt["exponent"] = t.exponent;
          jt["coeff_lo"] = t.coeff_lo;
          jt["coeff_hi"] = t.coeff_hi;
          break;
      }
      j["tail"] = jt;
      break;
    }
  }
  if (!s.description().empty()) j["description"] = s.description();
  return j.dump();
}

}  // namespace smallball
