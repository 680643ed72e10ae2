// Copyright 2026 Coalshare Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COALSHARE_SCENARIO_IO_HPP
#define COALSHARE_SCENARIO_IO_HPP

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "coalshare/model.hpp"
#include "json.hpp"

namespace coalshare {

class ScenarioParseError : public std::runtime_error {
 public:
  explicit ScenarioParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj, const std::string& path,
                                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) throw ScenarioParseError(path + ": unknown key \"" + it.key() + "\"");
  }
}

inline const nlohmann::json& require_key(const nlohmann::json& obj,
                                         const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ScenarioParseError(path + ": missing key \"" + key + "\"");
  return *it;
}

inline double as_number(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number()) throw ScenarioParseError(path + ": expected a number");
  return v.get<double>();
}

inline std::vector<double> as_number_array(const nlohmann::json& v,
                                           const std::string& path) {
  if (!v.is_array()) throw ScenarioParseError(path + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace detail

inline std::string family_name(UtilityFamily f) {
  return f == UtilityFamily::Sigmoidal ? "sigmoidal" : "linear";
}

inline UtilityFamily family_from_name(const std::string& name) {
  if (name == "sigmoidal") return UtilityFamily::Sigmoidal;
  if (name == "linear") return UtilityFamily::Linear;
  throw ScenarioParseError("unknown utility family \"" + name +
                           "\" (expected \"sigmoidal\" or \"linear\")");
}

/// Parses the canonical scenario document. Field order is irrelevant; unknown
/// keys are rejected so that silently misspelled fields cannot slip through.
inline Scenario parse_scenario(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ScenarioParseError("top level must be an object");
  detail::reject_unknown_keys(doc, "$", {"resource_kinds", "providers", "seed"});

  Scenario s;
  const auto& kinds = detail::require_key(doc, "$", "resource_kinds");
  if (!kinds.is_array()) throw ScenarioParseError("$.resource_kinds: expected an array");
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    if (!kinds[k].is_string()) {
      throw ScenarioParseError("$.resource_kinds[" + std::to_string(k) +
                               "]: expected a string label");
    }
    s.resource_kinds.push_back(ResourceKind{static_cast<int>(k), kinds[k].get<std::string>()});
  }

  const auto& providers = detail::require_key(doc, "$", "providers");
  if (!providers.is_array()) throw ScenarioParseError("$.providers: expected an array");
  for (std::size_t pi = 0; pi < providers.size(); ++pi) {
    const std::string ppath = "$.providers[" + std::to_string(pi) + "]";
    const auto& pj = providers[pi];
    if (!pj.is_object()) throw ScenarioParseError(ppath + ": expected an object");
    detail::reject_unknown_keys(pj, ppath,
                                {"id", "capacity", "weight_native", "weight_foreign",
                                 "utility", "apps"});
    ProviderSpec p;
    p.id = static_cast<int>(detail::as_number(detail::require_key(pj, ppath, "id"),
                                              ppath + ".id"));
    p.capacity = detail::as_number_array(detail::require_key(pj, ppath, "capacity"),
                                         ppath + ".capacity");
    p.weight_native = detail::as_number(detail::require_key(pj, ppath, "weight_native"),
                                        ppath + ".weight_native");
    p.weight_foreign = detail::as_number(
        detail::require_key(pj, ppath, "weight_foreign"), ppath + ".weight_foreign");

    const auto& uj = detail::require_key(pj, ppath, "utility");
    if (!uj.is_object()) throw ScenarioParseError(ppath + ".utility: expected an object");
    detail::reject_unknown_keys(uj, ppath + ".utility", {"family", "mu"});
    const auto& fam = detail::require_key(uj, ppath + ".utility", "family");
    if (!fam.is_string())
      throw ScenarioParseError(ppath + ".utility.family: expected a string");
    p.utility.family = family_from_name(fam.get<std::string>());
    if (auto it = uj.find("mu"); it != uj.end()) {
      p.utility.mu = detail::as_number(*it, ppath + ".utility.mu");
    }

    const auto& apps = detail::require_key(pj, ppath, "apps");
    if (!apps.is_array()) throw ScenarioParseError(ppath + ".apps: expected an array");
    for (std::size_t ai = 0; ai < apps.size(); ++ai) {
      const std::string apath = ppath + ".apps[" + std::to_string(ai) + "]";
      const auto& aj = apps[ai];
      if (!aj.is_object()) throw ScenarioParseError(apath + ": expected an object");
      detail::reject_unknown_keys(aj, apath, {"id", "request"});
      ApplicationSpec app;
      app.id = static_cast<int>(detail::as_number(detail::require_key(aj, apath, "id"),
                                                  apath + ".id"));
      app.owner = p.id;
      app.request = detail::as_number_array(detail::require_key(aj, apath, "request"),
                                            apath + ".request");
      p.native_apps.push_back(std::move(app));
    }
    s.providers.push_back(std::move(p));
  }

  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned()) {
      throw ScenarioParseError("$.seed: expected an unsigned integer");
    }
    s.seed = it->get<std::uint64_t>();
  }
  return s;
}

inline std::string serialize_scenario(const Scenario& s) {
  nlohmann::ordered_json doc;
  doc["resource_kinds"] = nlohmann::json::array();
  for (const auto& rk : s.resource_kinds) doc["resource_kinds"].push_back(rk.label);
  doc["providers"] = nlohmann::json::array();
  for (const auto& p : s.providers) {
    nlohmann::ordered_json pj;
    pj["id"] = p.id;
    pj["capacity"] = p.capacity;
    pj["weight_native"] = p.weight_native;
    pj["weight_foreign"] = p.weight_foreign;
    pj["utility"] = {{"family", family_name(p.utility.family)}, {"mu", p.utility.mu}};
    pj["apps"] = nlohmann::json::array();
    for (const auto& app : p.native_apps) {
      pj["apps"].push_back(nlohmann::ordered_json{{"id", app.id}, {"request", app.request}});
    }
    doc["providers"].push_back(std::move(pj));
  }
  if (s.seed) doc["seed"] = *s.seed;
  return doc.dump(2) + "\n";
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError("cannot open scenario file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_scenario(text);
}

inline void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario file: " + path);
  out << serialize_scenario(s);
}

}  // namespace coalshare

#endif  // COALSHARE_SCENARIO_IO_HPP
