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

#include "coalshare/utility.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "support.hpp"

namespace coalshare {
namespace {

using coalshare_tests::linear_provider;
using coalshare_tests::make_scenario;
using coalshare_tests::sigmoid_provider;

// sigma(-1) = 1 / (1 + e), the sigmoidal term for a fully starved unit of
// demand at mu * r = 1. Used as a hand anchor throughout.
constexpr double kSigmaMinusOne = 0.2689414213699951;

TEST(SigmoidCore, AnchorsAndSymmetry) {
  EXPECT_DOUBLE_EQ(detail::sigmoid(0.0), 0.5);
  EXPECT_NEAR(detail::sigmoid(-1.0), kSigmaMinusOne, 1e-15);
  EXPECT_NEAR(detail::sigmoid(1.0), 1.0 - kSigmaMinusOne, 1e-15);
  // Extreme arguments saturate instead of overflowing.
  EXPECT_NEAR(detail::sigmoid(1e6), 1.0, 1e-12);
  EXPECT_NEAR(detail::sigmoid(-1e6), 0.0, 1e-12);
  for (double z = -30.0; z <= 30.0; z += 0.7) {
    const double v = detail::sigmoid(z);
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
    EXPECT_NEAR(v + detail::sigmoid(-z), 1.0, 1e-12);
  }
}

TEST(SigmoidCore, StrictlyIncreasing) {
  double prev = detail::sigmoid(-20.0);
  for (double z = -19.5; z <= 20.0; z += 0.5) {
    const double cur = detail::sigmoid(z);
    EXPECT_GT(cur, prev);
    prev = cur;
  }
}

TEST(FamilyTerm, LinearIsRawAllocation) {
  const UtilityConfig cfg{UtilityFamily::Linear, 0.01};
  EXPECT_DOUBLE_EQ(detail::family_term(cfg, 3.25, 10.0), 3.25);
  EXPECT_DOUBLE_EQ(detail::family_term(cfg, 0.0, 10.0), 0.0);
  EXPECT_DOUBLE_EQ(detail::family_term_grad(cfg, 7.0, 10.0), 1.0);
}

TEST(FamilyTerm, SigmoidalGradientMatchesFiniteDifference) {
  const UtilityConfig cfg{UtilityFamily::Sigmoidal, 0.1};
  const double h = 1e-6;
  for (double x : {0.0, 1.5, 4.0, 9.0, 20.0}) {
    const double fd =
        (detail::family_term(cfg, x + h, 10.0) - detail::family_term(cfg, x - h, 10.0)) /
        (2.0 * h);
    EXPECT_NEAR(detail::family_term_grad(cfg, x, 10.0), fd, 1e-8);
  }
}

TEST(NativeUtility, SigmoidAtExactRequestIsHalfPerPair) {
  // Two apps, two resources, every (app, resource) pair allocated exactly its
  // request: each term is sigma(0) = 0.5, so the total is 4 * 0.5 = 2.
  Scenario s = make_scenario(
      {sigmoid_provider({20.0, 20.0}, {{4.0, 6.0}, {2.0, 8.0}}, 0.01)});
  Allocation a = Allocation::zeros(s, {0});
  a.at(0, 0, 0) = 4.0;
  a.at(0, 0, 1) = 6.0;
  a.at(0, 1, 0) = 2.0;
  a.at(0, 1, 1) = 8.0;
  EXPECT_NEAR(native_utility(s, a, 0), 2.0, 1e-12);
}

TEST(NativeUtility, SigmoidStarvedAppYieldsSigmaOfMinusMuR) {
  // One app requesting 100; nothing allocated; mu = 0.01 so the single term
  // is sigma(-1).
  Scenario s = make_scenario({sigmoid_provider({100.0}, {{100.0}}, 0.01)});
  Allocation a = Allocation::zeros(s, {0});
  EXPECT_NEAR(native_utility(s, a, 0), kSigmaMinusOne, 1e-15);
}

TEST(NativeUtility, LinearSumsAllocatedAmounts) {
  Scenario s = make_scenario({linear_provider({10.0, 10.0}, {{4.0, 6.0}})});
  Allocation a = Allocation::zeros(s, {0});
  a.at(0, 0, 0) = 3.0;
  a.at(0, 0, 1) = 4.5;
  EXPECT_DOUBLE_EQ(native_utility(s, a, 0), 7.5);
}

TEST(NativeUtility, IgnoresForeignApps) {
  Scenario s = coalshare_tests::donor_pair_scenario();
  Allocation a = Allocation::zeros(s, {0, 1});
  a.at(0, 0, 0) = 4.0;  // own app
  a.at(0, 1, 0) = 4.0;  // provider 1's app, must not count here
  EXPECT_DOUBLE_EQ(native_utility(s, a, 0), 4.0);
}

TEST(CrossUtility, CountsOnlyGuestAppsWithHostFamily) {
  // Host 0 is linear, guest 1 sigmoidal; host's family applies to the
  // guest's app, so the cross term is the raw amount 1.5.
  Scenario s = make_scenario({
      linear_provider({8.0}, {{4.0}}),
      sigmoid_provider({0.0}, {{4.0}}, 0.1),
  });
  Allocation a = Allocation::zeros(s, {0, 1});
  a.at(0, 1, 0) = 1.5;
  EXPECT_DOUBLE_EQ(cross_utility(s, a, 0, 1), 1.5);
  EXPECT_DOUBLE_EQ(cross_utility(s, a, 1, 0), detail::sigmoid(0.1 * (0.0 - 4.0)));

  Allocation empty = Allocation::zeros(s, {0, 1});
  EXPECT_DOUBLE_EQ(cross_utility(s, empty, 0, 1), 0.0);
}

TEST(CrossUtility, RejectsSelfPairing) {
  Scenario s = coalshare_tests::donor_pair_scenario();
  Allocation a = Allocation::zeros(s, {0, 1});
  EXPECT_THROW(cross_utility(s, a, 0, 0), std::invalid_argument);
  EXPECT_THROW(cross_utility(s, a, 0, 5), std::invalid_argument);
  EXPECT_THROW(native_utility(s, a, -1), std::invalid_argument);
}

TEST(SatisfactionTerm, FullFillIsOnePerPair) {
  // App requests (4, 5) and receives (4, 5): 4/4 + 5/5 = 2.
  Scenario s = make_scenario({linear_provider({10.0, 10.0}, {{4.0, 5.0}})});
  Allocation a = Allocation::zeros(s, {0});
  a.at(0, 0, 0) = 4.0;
  a.at(0, 0, 1) = 5.0;
  EXPECT_DOUBLE_EQ(satisfaction_term(s, a, 0, {0}), 2.0);
}

TEST(SatisfactionTerm, PartialFillAndZeroRequestPairs) {
  // App requests (4, 5), receives (2, 5): 2/4 + 5/5 = 1.5. A second app with
  // an all-positive-on-one-axis request (0, 3) contributes only the k=1 pair.
  Scenario s = make_scenario(
      {linear_provider({10.0, 10.0}, {{4.0, 5.0}, {0.0, 3.0}})});
  Allocation a = Allocation::zeros(s, {0});
  a.at(0, 0, 0) = 2.0;
  a.at(0, 0, 1) = 5.0;
  EXPECT_DOUBLE_EQ(satisfaction_term(s, a, 0, {0}), 1.5);
  a.at(0, 1, 1) = 3.0;
  EXPECT_DOUBLE_EQ(satisfaction_term(s, a, 0, {0}), 2.5);
}

TEST(SatisfactionTerm, SumsDonationsAcrossCoalition) {
  // Provider 1's app gets 1 from itself and 2 from provider 0: fill 3/4.
  Scenario s = coalshare_tests::donor_pair_scenario();
  Allocation a = Allocation::zeros(s, {0, 1});
  a.at(1, 1, 0) = 1.0;
  a.at(0, 1, 0) = 2.0;
  EXPECT_DOUBLE_EQ(satisfaction_term(s, a, 1, {0, 1}), 0.75);
  // Restricting the coalition to the owner alone ignores the donation.
  EXPECT_DOUBLE_EQ(satisfaction_term(s, a, 1, {1}), 0.25);
}

TEST(StandaloneObjective, StarvedSigmoidProvider) {
  Scenario s = make_scenario({sigmoid_provider({0.0}, {{100.0}}, 0.01)});
  Allocation a = Allocation::zeros(s, {0});
  EXPECT_NEAR(standalone_objective(s, a, 0), kSigmaMinusOne, 1e-15);
}

TEST(StandaloneObjective, LinearFullFill) {
  // Native 4 + satisfaction 1 = 5.
  Scenario s = make_scenario({linear_provider({8.0}, {{4.0}})});
  Allocation a = Allocation::zeros(s, {0});
  a.at(0, 0, 0) = 4.0;
  EXPECT_DOUBLE_EQ(standalone_objective(s, a, 0), 5.0);
}

TEST(ProviderObjective, SingletonWithUnitWeightsEqualsStandalone) {
  Scenario s = make_scenario(
      {sigmoid_provider({6.0, 6.0}, {{4.0, 2.0}, {1.0, 5.0}}, 0.1)});
  Allocation a = Allocation::zeros(s, {0});
  a.at(0, 0, 0) = 3.0;
  a.at(0, 1, 1) = 2.0;
  const ObjectiveWeights unit = ObjectiveWeights::ones(1);
  EXPECT_DOUBLE_EQ(provider_objective(s, a, 0, {0}, unit),
                   standalone_objective(s, a, 0));
}

TEST(ProviderObjective, WeightsScaleTheRightPieces) {
  Scenario s = coalshare_tests::donor_pair_scenario();
  Allocation a = Allocation::zeros(s, {0, 1});
  a.at(0, 0, 0) = 4.0;  // provider 0 fills its own app
  a.at(0, 1, 0) = 2.0;  // and donates 2 to provider 1's app

  ObjectiveWeights weights = ObjectiveWeights::ones(2);
  // Provider 0: native 4, cross 2, satisfaction 4/4 = 1.
  EXPECT_DOUBLE_EQ(provider_objective(s, a, 0, {0, 1}, weights), 7.0);
  // Provider 1: native 0, cross 0, satisfaction 2/4 = 0.5.
  EXPECT_DOUBLE_EQ(provider_objective(s, a, 1, {0, 1}, weights), 0.5);

  weights.w[0] = 2.0;
  EXPECT_DOUBLE_EQ(provider_objective(s, a, 0, {0, 1}, weights), 11.0);
  weights.zeta[0] = 0.0;
  EXPECT_DOUBLE_EQ(provider_objective(s, a, 0, {0, 1}, weights), 9.0);
}

TEST(ProviderObjective, MonotoneInOwnReceivedAllocation) {
  // Giving an app more of its requested resource never hurts its owner.
  Scenario s = make_scenario({sigmoid_provider({10.0}, {{8.0}}, 0.1)});
  const ObjectiveWeights unit = ObjectiveWeights::ones(1);
  double prev = -1.0;
  for (double x = 0.0; x <= 8.0; x += 0.5) {
    Allocation a = Allocation::zeros(s, {0});
    a.at(0, 0, 0) = x;
    const double cur = provider_objective(s, a, 0, {0}, unit);
    EXPECT_GT(cur, prev);
    prev = cur;
  }
}

TEST(ScenarioWeights, CollectsProviderFields) {
  Scenario s = make_scenario({
      linear_provider({1.0}, {{1.0}}),
      linear_provider({1.0}, {{1.0}}),
  });
  s.providers[0].weight_native = 3.0;
  s.providers[1].weight_foreign = 0.25;
  const ObjectiveWeights weights = scenario_weights(s);
  ASSERT_EQ(weights.w.size(), 2u);
  ASSERT_EQ(weights.zeta.size(), 2u);
  EXPECT_DOUBLE_EQ(weights.w[0], 3.0);
  EXPECT_DOUBLE_EQ(weights.w[1], 1.0);
  EXPECT_DOUBLE_EQ(weights.zeta[0], 1.0);
  EXPECT_DOUBLE_EQ(weights.zeta[1], 0.25);
}

}  // namespace
}  // namespace coalshare
