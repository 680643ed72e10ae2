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

#include "coalshare/generator.hpp"

#include <gtest/gtest.h>

#include <stdexcept>
#include <vector>

namespace coalshare {
namespace {

TEST(Presets, FourNetworkSizes) {
  GeneratorConfig c1 = preset_config(1);
  EXPECT_EQ(c1.providers, 3);
  EXPECT_EQ(c1.apps_per_provider, 3);
  EXPECT_EQ(c1.resources, 3);

  GeneratorConfig c2 = preset_config(2);
  EXPECT_EQ(c2.providers, 3);
  EXPECT_EQ(c2.apps_per_provider, 20);

  GeneratorConfig c3 = preset_config(3);
  EXPECT_EQ(c3.providers, 6);
  EXPECT_EQ(c3.apps_per_provider, 6);

  GeneratorConfig c4 = preset_config(4);
  EXPECT_EQ(c4.providers, 6);
  EXPECT_EQ(c4.apps_per_provider, 20);
  EXPECT_EQ(c4.resources, 3);

  EXPECT_THROW(preset_config(0), std::invalid_argument);
  EXPECT_THROW(preset_config(5), std::invalid_argument);
}

TEST(Presets, DefaultDeficitSideScalesWithProviders) {
  EXPECT_EQ(preset_config(1).resolved_deficit_count(), 1);
  EXPECT_EQ(preset_config(3).resolved_deficit_count(), 2);

  GeneratorConfig cfg = preset_config(1);
  cfg.deficit_count = 0;
  EXPECT_EQ(cfg.resolved_deficit_count(), 0);
  cfg.deficit_count = 3;
  EXPECT_EQ(cfg.resolved_deficit_count(), 3);
}

TEST(Generate, ShapeMatchesTheConfig) {
  const Scenario s = generate_scenario(preset_config(2), 7);
  EXPECT_EQ(s.provider_count(), 3);
  EXPECT_EQ(s.resource_count(), 3);
  EXPECT_EQ(s.app_count(), 60);
  ASSERT_TRUE(s.seed.has_value());
  EXPECT_EQ(*s.seed, 7u);

  // Dense ids and globally sequential app ids, in listing order.
  int expected_app = 0;
  for (int n = 0; n < s.provider_count(); ++n) {
    EXPECT_EQ(s.providers[n].id, n);
    for (const ApplicationSpec& app : s.providers[n].native_apps) {
      EXPECT_EQ(app.id, expected_app++);
      EXPECT_EQ(app.owner, n);
    }
  }
}

TEST(Generate, StockResourceLabels) {
  const Scenario s = generate_scenario(preset_config(1), 1);
  EXPECT_EQ(s.resource_kinds[0].label, "storage");
  EXPECT_EQ(s.resource_kinds[1].label, "compute");
  EXPECT_EQ(s.resource_kinds[2].label, "communication");

  GeneratorConfig wide = preset_config(1);
  wide.resources = 4;
  const Scenario s4 = generate_scenario(wide, 1);
  EXPECT_EQ(s4.resource_kinds[3].label, "resource3");
}

TEST(Generate, SameSeedSameScenarioDifferentSeedDifferent) {
  const GeneratorConfig cfg = preset_config(1);
  const Scenario a = generate_scenario(cfg, 99);
  const Scenario b = generate_scenario(cfg, 99);
  EXPECT_TRUE(a == b);
  const Scenario c = generate_scenario(cfg, 100);
  EXPECT_FALSE(a == c);
}

TEST(Generate, OutputPassesValidation) {
  for (int preset : {1, 2, 3, 4}) {
    const Scenario s = generate_scenario(preset_config(preset), 42);
    EXPECT_TRUE(validate_scenario(s).empty()) << "preset " << preset;
  }
}

TEST(Generate, RequestsStayInTheConfiguredRange) {
  GeneratorConfig cfg = preset_config(1);
  cfg.request_low = 2.0;
  cfg.request_high = 3.0;
  const Scenario s = generate_scenario(cfg, 5);
  for (const ProviderSpec& p : s.providers) {
    for (const ApplicationSpec& app : p.native_apps) {
      for (double r : app.request) {
        EXPECT_GE(r, 2.0);
        EXPECT_LE(r, 3.0);
      }
    }
  }
}

TEST(Generate, DeficitAndSurplusCapacitiesBracketOwnDemand) {
  GeneratorConfig cfg = preset_config(3);  // 6 providers, 2 on the deficit side
  const Scenario s = generate_scenario(cfg, 31);
  const int deficit_count = cfg.resolved_deficit_count();
  ASSERT_EQ(deficit_count, 2);

  for (int n = 0; n < s.provider_count(); ++n) {
    const ProviderSpec& p = s.providers[n];
    for (int k = 0; k < s.resource_count(); ++k) {
      double demand = 0.0;
      for (const ApplicationSpec& app : p.native_apps) demand += app.request[k];
      const double ratio = p.capacity[k] / demand;
      if (n < deficit_count) {
        EXPECT_GE(ratio, cfg.deficit_low - 1e-12) << "provider " << n;
        EXPECT_LE(ratio, cfg.deficit_high + 1e-12) << "provider " << n;
      } else {
        EXPECT_GE(ratio, cfg.surplus_low - 1e-12) << "provider " << n;
        EXPECT_LE(ratio, cfg.surplus_high + 1e-12) << "provider " << n;
      }
    }
  }
}

TEST(Generate, UtilityAndWeightsPropagate) {
  GeneratorConfig cfg = preset_config(1);
  cfg.utility = {UtilityFamily::Linear, 0.01};
  cfg.weight_native = 2.0;
  cfg.weight_foreign = 0.5;
  const Scenario s = generate_scenario(cfg, 3);
  for (const ProviderSpec& p : s.providers) {
    EXPECT_EQ(p.utility.family, UtilityFamily::Linear);
    EXPECT_DOUBLE_EQ(p.weight_native, 2.0);
    EXPECT_DOUBLE_EQ(p.weight_foreign, 0.5);
  }

  cfg.utility = {UtilityFamily::Sigmoidal, 0.1};
  const Scenario s2 = generate_scenario(cfg, 3);
  EXPECT_DOUBLE_EQ(s2.providers[0].utility.mu, 0.1);
}

TEST(Generate, RejectsBrokenConfigs) {
  auto broken = [](auto mutate) {
    GeneratorConfig cfg = preset_config(1);
    mutate(cfg);
    EXPECT_THROW(generate_scenario(cfg, 1), std::invalid_argument);
  };
  broken([](GeneratorConfig& c) { c.providers = 0; });
  broken([](GeneratorConfig& c) { c.apps_per_provider = 0; });
  broken([](GeneratorConfig& c) { c.resources = 0; });
  broken([](GeneratorConfig& c) { c.request_low = 0.0; });
  broken([](GeneratorConfig& c) { c.request_high = 0.5; });
  broken([](GeneratorConfig& c) { c.deficit_high = 0.1; });
  broken([](GeneratorConfig& c) { c.surplus_high = 1.0; });
  broken([](GeneratorConfig& c) { c.deficit_count = 4; });
  broken([](GeneratorConfig& c) { c.utility.mu = 0.0; });
  broken([](GeneratorConfig& c) { c.weight_native = -1.0; });
}

}  // namespace
}  // namespace coalshare
