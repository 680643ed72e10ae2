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

#ifndef COALSHARE_UTILITY_HPP
#define COALSHARE_UTILITY_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "coalshare/model.hpp"

namespace coalshare {

/// Objective weights per provider: `w[n]` scales the provider's native
/// utility, `zeta[n]` the utility it earns hosting other providers' apps.
struct ObjectiveWeights {
  std::vector<double> w;
  std::vector<double> zeta;

  static ObjectiveWeights ones(int n) {
    return ObjectiveWeights{std::vector<double>(n, 1.0), std::vector<double>(n, 1.0)};
  }
};

namespace detail {

// Exponent clamped to +-500 so the exponential cannot overflow; the clamp is
// invisible at any tolerance this library works to.
inline double sigmoid(double z) {
  z = std::min(500.0, std::max(-500.0, z));
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Per-(app, resource) utility term of one unit of the given family.
inline double family_term(const UtilityConfig& cfg, double x, double r) {
  if (cfg.family == UtilityFamily::Linear) return x;
  return sigmoid(cfg.mu * (x - r));
}

// Derivative of family_term with respect to x.
inline double family_term_grad(const UtilityConfig& cfg, double x, double r) {
  if (cfg.family == UtilityFamily::Linear) return 1.0;
  const double s = sigmoid(cfg.mu * (x - r));
  return cfg.mu * s * (1.0 - s);
}

inline void check_provider_id(const Scenario& s, int n, const char* what) {
  if (n < 0 || n >= s.provider_count()) {
    throw std::invalid_argument(std::string(what) + ": unknown provider id " +
                                std::to_string(n));
  }
}

}  // namespace detail

/// Utility provider n earns from its own allocation to its native apps.
/// Sigmoidal sums sigmoid(mu * (x - r)) over every (app, resource) pair;
/// linear sums the allocated amounts.
inline double native_utility(const Scenario& s, const Allocation& a, int n) {
  detail::check_provider_id(s, n, "native_utility");
  const ProviderSpec& p = s.providers[n];
  const auto apps = app_table(s);
  double total = 0.0;
  for (const AppRef& app : apps) {
    if (app.owner != n) continue;
    const std::vector<double>& req = request_of(s, app);
    for (int k = 0; k < s.resource_count(); ++k) {
      total += detail::family_term(p.utility, a.at(n, app.index, k), req[k]);
    }
  }
  return total;
}

/// Utility the host provider earns by allocating its own resources to the
/// guest provider's apps, evaluated with the host's utility family against
/// the guest apps' requests.
inline double cross_utility(const Scenario& s, const Allocation& a, int host, int guest) {
  detail::check_provider_id(s, host, "cross_utility");
  detail::check_provider_id(s, guest, "cross_utility");
  if (host == guest) {
    throw std::invalid_argument("cross_utility: host and guest are both provider " +
                                std::to_string(host) + "; use native_utility");
  }
  const ProviderSpec& hp = s.providers[host];
  const auto apps = app_table(s);
  double total = 0.0;
  for (const AppRef& app : apps) {
    if (app.owner != guest) continue;
    const std::vector<double>& req = request_of(s, app);
    for (int k = 0; k < s.resource_count(); ++k) {
      total += detail::family_term(hp.utility, a.at(host, app.index, k), req[k]);
    }
  }
  return total;
}

/// Fill-ratio sum over provider n's native apps: allocated-from-anyone over
/// requested, per (app, resource). Zero-request pairs are skipped; the demand
/// cap pins their allocation to zero anyway.
inline double satisfaction_term(const Scenario& s, const Allocation& a, int n,
                                const std::vector<int>& coalition) {
  detail::check_provider_id(s, n, "satisfaction_term");
  const auto apps = app_table(s);
  double total = 0.0;
  for (const AppRef& app : apps) {
    if (app.owner != n) continue;
    const std::vector<double>& req = request_of(s, app);
    for (int k = 0; k < s.resource_count(); ++k) {
      if (req[k] <= 0.0) continue;
      double got = 0.0;
      for (int l : coalition) got += a.at(l, app.index, k);
      total += got / req[k];
    }
  }
  return total;
}

/// Collects the per-provider weight fields of a scenario into the (w, zeta)
/// vectors the objective functions take.
inline ObjectiveWeights scenario_weights(const Scenario& s) {
  ObjectiveWeights weights;
  weights.w.reserve(s.providers.size());
  weights.zeta.reserve(s.providers.size());
  for (const ProviderSpec& p : s.providers) {
    weights.w.push_back(p.weight_native);
    weights.zeta.push_back(p.weight_foreign);
  }
  return weights;
}

/// Objective of a provider working alone: unweighted native utility plus its
/// own satisfaction term. This is the quantity the individual-rationality
/// bound compares against.
inline double standalone_objective(const Scenario& s, const Allocation& a, int n) {
  return native_utility(s, a, n) + satisfaction_term(s, a, n, {n});
}

/// Provider n's full objective inside a coalition: weighted native utility,
/// plus weighted cross utilities toward every other member, plus the
/// satisfaction term. For a singleton coalition with unit weights this is the
/// standalone objective.
inline double provider_objective(const Scenario& s, const Allocation& a, int n,
                                 const std::vector<int>& coalition,
                                 const ObjectiveWeights& weights) {
  detail::check_provider_id(s, n, "provider_objective");
  double total = weights.w[n] * native_utility(s, a, n);
  for (int j : coalition) {
    if (j == n) continue;
    total += weights.zeta[n] * cross_utility(s, a, n, j);
  }
  total += satisfaction_term(s, a, n, coalition);
  return total;
}

}  // namespace coalshare

#endif  // COALSHARE_UTILITY_HPP
