#include "lqu/tolerances.hpp"

#include <cstdlib>
#include <map>
#include <sstream>

#include <json.hpp>

#include "lqu/errors.hpp"

namespace lqu {

namespace {

std::map<std::string, double Tolerances::*> field_map() {
  return {
      {"hermiticity", &Tolerances::hermiticity},
      {"trace", &Tolerances::trace},
      {"psd_clip", &Tolerances::psd_clip},
      {"unitarity", &Tolerances::unitarity},
      {"spectrum_gap", &Tolerances::spectrum_gap},
      {"completeness", &Tolerances::completeness},
      {"w_imag", &Tolerances::w_imag},
      {"purity", &Tolerances::purity},
      {"outcome_prob", &Tolerances::outcome_prob},
      {"sld_cutoff", &Tolerances::sld_cutoff},
      {"lqu_clamp", &Tolerances::lqu_clamp},
  };
}

Tolerances load() {
  Tolerances t;
  const char* env = std::getenv("LQU_TOLERANCES");
  if (env == nullptr || *env == '\0') return t;
  nlohmann::json j = nlohmann::json::parse(env, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw parse_error("LQU_TOLERANCES: expected a JSON object of field -> value");
  }
  auto fields = field_map();
  for (const auto& [key, value] : j.items()) {
    auto it = fields.find(key);
    if (it == fields.end()) {
      throw parse_error("LQU_TOLERANCES: unknown field \"" + key + "\"");
    }
    if (!value.is_number()) {
      throw parse_error("LQU_TOLERANCES: field \"" + key + "\" must be a number");
    }
    t.*(it->second) = value.get<double>();
  }
  return t;
}

}  // namespace

const Tolerances& tolerances() {
  static const Tolerances t = load();
  return t;
}

std::string tolerances_json() {
  const Tolerances& t = tolerances();
  nlohmann::json j;
  for (const auto& [key, member] : field_map()) j[key] = t.*member;
  return j.dump();
}

}  // namespace lqu
