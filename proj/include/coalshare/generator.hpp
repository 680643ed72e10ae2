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

#ifndef COALSHARE_GENERATOR_HPP
#define COALSHARE_GENERATOR_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "coalshare/model.hpp"

namespace coalshare {

/// Knobs for random scenario generation. Capacities are drawn relative to the
/// provider's own demand: the first `deficit_count` providers land below it
/// (they will need the coalition), the rest comfortably above.
struct GeneratorConfig {
  int providers = 3;
  int apps_per_provider = 3;
  int resources = 3;

  double request_low = 1.0;
  double request_high = 10.0;
  // Capacity multiplier ranges, applied per resource kind to the provider's
  // own total demand for that kind.
  double deficit_low = 0.3;
  double deficit_high = 0.7;
  double surplus_low = 1.5;
  double surplus_high = 3.0;
  // Providers 0 .. deficit_count-1 are the deficit side; -1 picks
  // max(1, providers / 3).
  int deficit_count = -1;

  UtilityConfig utility{UtilityFamily::Sigmoidal, 0.01};
  double weight_native = 1.0;
  double weight_foreign = 1.0;

  int resolved_deficit_count() const {
    return deficit_count >= 0 ? deficit_count : std::max(1, providers / 3);
  }
};

/// The four bundled network sizes; K = 3 resource kinds in all of them.
inline GeneratorConfig preset_config(int preset) {
  GeneratorConfig cfg;
  switch (preset) {
    case 1: cfg.providers = 3; cfg.apps_per_provider = 3; break;
    case 2: cfg.providers = 3; cfg.apps_per_provider = 20; break;
    case 3: cfg.providers = 6; cfg.apps_per_provider = 6; break;
    case 4: cfg.providers = 6; cfg.apps_per_provider = 20; break;
    default:
      throw std::invalid_argument("preset must be 1, 2, 3, or 4");
  }
  return cfg;
}

namespace detail {

inline void validate_generator_config(const GeneratorConfig& cfg) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("generate: " + msg); };
  if (cfg.providers < 1) fail("need at least one provider");
  if (cfg.apps_per_provider < 1) fail("need at least one app per provider");
  if (cfg.resources < 1) fail("need at least one resource kind");
  if (!(cfg.request_low > 0.0) || cfg.request_high < cfg.request_low) {
    fail("request range must satisfy 0 < low <= high");
  }
  if (cfg.deficit_low < 0.0 || cfg.deficit_high < cfg.deficit_low) {
    fail("deficit multiplier range must satisfy 0 <= low <= high");
  }
  if (cfg.surplus_low < 0.0 || cfg.surplus_high < cfg.surplus_low) {
    fail("surplus multiplier range must satisfy 0 <= low <= high");
  }
  const int d = cfg.resolved_deficit_count();
  if (d < 0 || d > cfg.providers) fail("deficit count out of range");
  if (cfg.utility.family == UtilityFamily::Sigmoidal && !(cfg.utility.mu > 0.0)) {
    fail("sigmoidal steepness must be positive");
  }
  if (cfg.weight_native < 0.0 || cfg.weight_foreign < 0.0) fail("weights must be non-negative");
}

}  // namespace detail

/// Draws a random scenario. Per provider, in id order: every app's requests
/// first (app by app, resource by resource), then the provider's capacities
/// (resource by resource) as multiplier × own demand. The seed is recorded in
/// the scenario, so the same seed reproduces the same file.
inline Scenario generate_scenario(const GeneratorConfig& cfg, std::uint64_t seed) {
  detail::validate_generator_config(cfg);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> req_dist(cfg.request_low, cfg.request_high);
  std::uniform_real_distribution<double> deficit_dist(cfg.deficit_low, cfg.deficit_high);
  std::uniform_real_distribution<double> surplus_dist(cfg.surplus_low, cfg.surplus_high);

  const int K = cfg.resources;
  const int deficit_count = cfg.resolved_deficit_count();

  Scenario s;
  s.seed = seed;
  s.resource_kinds.reserve(K);
  const char* stock_labels[] = {"storage", "compute", "communication"};
  for (int k = 0; k < K; ++k) {
    const std::string label = k < 3 ? stock_labels[k] : "resource" + std::to_string(k);
    s.resource_kinds.push_back(ResourceKind{k, label});
  }

  int next_app_id = 0;
  for (int n = 0; n < cfg.providers; ++n) {
    ProviderSpec p;
    p.id = n;
    p.weight_native = cfg.weight_native;
    p.weight_foreign = cfg.weight_foreign;
    p.utility = cfg.utility;

    std::vector<double> demand(K, 0.0);
    for (int i = 0; i < cfg.apps_per_provider; ++i) {
      ApplicationSpec app;
      app.id = next_app_id++;
      app.owner = n;
      app.request.resize(K);
      for (int k = 0; k < K; ++k) {
        app.request[k] = req_dist(rng);
        demand[k] += app.request[k];
      }
      p.native_apps.push_back(std::move(app));
    }

    p.capacity.resize(K);
    const bool deficit = n < deficit_count;
    for (int k = 0; k < K; ++k) {
      const double mult = deficit ? deficit_dist(rng) : surplus_dist(rng);
      p.capacity[k] = mult * demand[k];
    }
    s.providers.push_back(std::move(p));
  }
  return s;
}

}  // namespace coalshare

#endif  // COALSHARE_GENERATOR_HPP
