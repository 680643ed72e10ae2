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
//
// Shared fixture builders for the test suite.

#ifndef COALSHARE_TESTS_SUPPORT_HPP
#define COALSHARE_TESTS_SUPPORT_HPP

#include <string>
#include <utility>
#include <vector>

#include "coalshare/model.hpp"

namespace coalshare_tests {

/// Compact description of one provider: capacity vector plus one request
/// vector per native app. App ids are assigned globally in listing order.
struct ProviderBlueprint {
  std::vector<double> capacity;
  std::vector<std::vector<double>> requests;
  coalshare::UtilityConfig utility{coalshare::UtilityFamily::Linear, 0.01};
  double weight_native = 1.0;
  double weight_foreign = 1.0;
};

inline ProviderBlueprint linear_provider(std::vector<double> capacity,
                                         std::vector<std::vector<double>> requests) {
  ProviderBlueprint bp;
  bp.capacity = std::move(capacity);
  bp.requests = std::move(requests);
  return bp;
}

inline ProviderBlueprint sigmoid_provider(std::vector<double> capacity,
                                          std::vector<std::vector<double>> requests,
                                          double mu) {
  ProviderBlueprint bp;
  bp.capacity = std::move(capacity);
  bp.requests = std::move(requests);
  bp.utility = {coalshare::UtilityFamily::Sigmoidal, mu};
  return bp;
}

inline coalshare::Scenario make_scenario(std::vector<ProviderBlueprint> blueprints) {
  coalshare::Scenario s;
  const int K = blueprints.empty() ? 0 : static_cast<int>(blueprints.front().capacity.size());
  for (int k = 0; k < K; ++k) {
    s.resource_kinds.push_back({k, "r" + std::to_string(k)});
  }
  int next_app_id = 0;
  for (std::size_t n = 0; n < blueprints.size(); ++n) {
    ProviderBlueprint& bp = blueprints[n];
    coalshare::ProviderSpec p;
    p.id = static_cast<int>(n);
    p.capacity = std::move(bp.capacity);
    p.weight_native = bp.weight_native;
    p.weight_foreign = bp.weight_foreign;
    p.utility = bp.utility;
    for (std::vector<double>& req : bp.requests) {
      coalshare::ApplicationSpec app;
      app.id = next_app_id++;
      app.owner = p.id;
      app.request = std::move(req);
      p.native_apps.push_back(std::move(app));
    }
    s.providers.push_back(std::move(p));
  }
  return s;
}

/// The two-provider reference instance used across solver and oracle tests:
/// one app each requesting 4 of the single resource; provider 0 holds
/// capacity 8, provider 1 none. With linear utilities and unit weights the
/// best split is fully worked out by hand in the tests that use it.
inline coalshare::Scenario donor_pair_scenario() {
  return make_scenario({
      linear_provider({8.0}, {{4.0}}),
      linear_provider({0.0}, {{4.0}}),
  });
}

}  // namespace coalshare_tests

#endif  // COALSHARE_TESTS_SUPPORT_HPP
