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

#ifndef COALSHARE_METRICS_HPP
#define COALSHARE_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coalshare/model.hpp"
#include "coalshare/solver.hpp"
#include "coalshare/utility.hpp"

namespace coalshare {

/// Fraction of demand met for one provider's applications, in percent:
/// the mean over its apps of (capped total received) / (total requested),
/// where both totals sum over resource kinds. Apps requesting nothing are
/// left out of the mean.
inline double satisfaction(const Scenario& s, const Allocation& a, int n) {
  detail::check_provider_id(s, n, "satisfaction");
  const int K = s.resource_count();
  const auto apps = app_table(s);

  double ratio_sum = 0.0;
  int counted = 0;
  for (const AppRef& app : apps) {
    if (app.owner != n) continue;
    const std::vector<double>& req = request_of(s, app);
    double wanted = 0.0, got = 0.0;
    for (int k = 0; k < K; ++k) {
      if (req[k] <= 0.0) continue;
      double received = 0.0;
      for (int m = 0; m < s.provider_count(); ++m) received += a.at(m, app.index, k);
      wanted += req[k];
      got += std::min(received, req[k]);
    }
    if (wanted > 0.0) {
      ratio_sum += got / wanted;
      ++counted;
    }
  }
  if (counted == 0) {
    throw std::invalid_argument("satisfaction: provider " + std::to_string(n) +
                                " has no applications with positive demand");
  }
  return 100.0 * ratio_sum / counted;
}

/// Share of each capacity pool the provider has handed out, in percent per
/// resource kind. A kind the provider has no capacity of reports 0.
inline std::vector<double> utilization(const Scenario& s, const Allocation& a, int n) {
  detail::check_provider_id(s, n, "utilization");
  const int K = s.resource_count();
  const auto apps = app_table(s);
  std::vector<double> out(K, 0.0);
  for (int k = 0; k < K; ++k) {
    const double cap = s.providers[n].capacity[k];
    if (cap <= 0.0) continue;
    double used = 0.0;
    for (const AppRef& app : apps) used += a.at(n, app.index, k);
    out[k] = 100.0 * used / cap;
  }
  return out;
}

/// Relative gain of the coalition payoff over the standalone payoff, in
/// percent. Undefined (absent) when the standalone payoff is not positive.
inline std::optional<double> improvement(double utility_alone, double utility_coalition) {
  if (utility_alone <= 0.0) return std::nullopt;
  return 100.0 * (utility_coalition - utility_alone) / utility_alone;
}

struct ProviderMetrics {
  int provider = 0;
  double utility_alone = 0.0;
  double utility_coalition = 0.0;
  std::optional<double> improvement_pct;
  double satisfaction_pct = 0.0;
  std::vector<double> utilization_pct;  // one entry per resource kind
};

struct MetricsReport {
  std::vector<ProviderMetrics> per_provider;
};

/// Condenses a full pipeline run into the per-provider comparison table:
/// standalone value vs. grand-coalition payoff, plus satisfaction and
/// utilization measured on the grand-coalition allocation.
inline MetricsReport build_metrics_report(const Scenario& s, const CoreSolveReport& core) {
  const int N = s.provider_count();
  if (static_cast<int>(core.standalone_values.size()) != N ||
      static_cast<int>(core.grand.per_provider_payoff.size()) != N) {
    throw std::invalid_argument("build_metrics_report: report does not match the scenario");
  }
  MetricsReport report;
  report.per_provider.reserve(N);
  for (int n = 0; n < N; ++n) {
    ProviderMetrics pm;
    pm.provider = n;
    pm.utility_alone = core.standalone_values[n];
    pm.utility_coalition = core.grand.per_provider_payoff[n];
    pm.improvement_pct = improvement(pm.utility_alone, pm.utility_coalition);
    pm.satisfaction_pct = satisfaction(s, core.grand.allocation, n);
    pm.utilization_pct = utilization(s, core.grand.allocation, n);
    report.per_provider.push_back(std::move(pm));
  }
  return report;
}

}  // namespace coalshare

#endif  // COALSHARE_METRICS_HPP
