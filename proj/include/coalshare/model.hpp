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

#ifndef COALSHARE_MODEL_HPP
#define COALSHARE_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace coalshare {

/// One resource type (storage, compute, ...). Indices are dense per scenario
/// and double as column indices into request and capacity vectors.
struct ResourceKind {
  int index = 0;
  std::string label;

  bool operator==(const ResourceKind&) const = default;
};

enum class UtilityFamily { Sigmoidal, Linear };

/// Per-provider utility shape. `mu` is the sigmoid steepness and is ignored
/// by the linear family.
struct UtilityConfig {
  UtilityFamily family = UtilityFamily::Sigmoidal;
  double mu = 0.01;

  bool operator==(const UtilityConfig&) const = default;
};

/// An application and the amount of each resource it asks for. `owner` is the
/// provider the application natively belongs to; ownership partitions the
/// global application set.
struct ApplicationSpec {
  int id = 0;
  int owner = 0;
  std::vector<double> request;  // size K, non-negative

  bool operator==(const ApplicationSpec&) const = default;
};

/// A cloud service provider: its capacities, native applications, objective
/// weights and utility shape.
struct ProviderSpec {
  int id = 0;
  std::vector<double> capacity;  // size K, non-negative
  std::vector<ApplicationSpec> native_apps;
  double weight_native = 1.0;   // weight on the provider's own utility
  double weight_foreign = 1.0;  // weight on utility earned hosting foreign apps
  UtilityConfig utility;

  bool operator==(const ProviderSpec&) const = default;
};

/// A complete problem instance. Immutable once built; every operation in this
/// library takes it by const reference and never mutates it.
struct Scenario {
  std::vector<ProviderSpec> providers;
  std::vector<ResourceKind> resource_kinds;
  std::optional<std::uint64_t> seed;  // provenance of random generation

  bool operator==(const Scenario&) const = default;

  int provider_count() const { return static_cast<int>(providers.size()); }
  int resource_count() const { return static_cast<int>(resource_kinds.size()); }
  int app_count() const {
    int m = 0;
    for (const auto& p : providers) m += static_cast<int>(p.native_apps.size());
    return m;
  }
};

/// Locates an application inside a scenario: `index` is the dense global
/// position obtained by concatenating providers' native apps in provider
/// order, `local` the position within the owner's list.
struct AppRef {
  int index = 0;
  int id = 0;
  int owner = 0;
  int local = 0;
};

/// Dense global application table in canonical order (provider order, then
/// declaration order within a provider). Allocation tensors index apps by
/// the `index` field of these entries.
inline std::vector<AppRef> app_table(const Scenario& s) {
  std::vector<AppRef> apps;
  apps.reserve(s.app_count());
  int idx = 0;
  for (const auto& p : s.providers) {
    for (int local = 0; local < static_cast<int>(p.native_apps.size()); ++local) {
      apps.push_back(AppRef{idx++, p.native_apps[local].id, p.id, local});
    }
  }
  return apps;
}

inline const std::vector<double>& request_of(const Scenario& s, const AppRef& a) {
  return s.providers[a.owner].native_apps[a.local].request;
}

/// The allocation decision tensor x[n][i][k]: amount of resource k at
/// provider n given to application i (global index). Entries are structurally
/// zero for providers or application owners outside `coalition`.
struct Allocation {
  int providers = 0;
  int apps = 0;
  int resources = 0;
  std::vector<int> coalition;  // sorted provider ids the allocation spans
  std::vector<double> x;       // dense, providers * apps * resources

  static Allocation zeros(const Scenario& s, std::vector<int> members) {
    Allocation a;
    a.providers = s.provider_count();
    a.apps = s.app_count();
    a.resources = s.resource_count();
    std::sort(members.begin(), members.end());
    a.coalition = std::move(members);
    a.x.assign(static_cast<std::size_t>(a.providers) * a.apps * a.resources, 0.0);
    return a;
  }

  double at(int n, int i, int k) const {
    return x[(static_cast<std::size_t>(n) * apps + i) * resources + k];
  }
  double& at(int n, int i, int k) {
    return x[(static_cast<std::size_t>(n) * apps + i) * resources + k];
  }

  bool in_coalition(int provider) const {
    return std::binary_search(coalition.begin(), coalition.end(), provider);
  }

  bool operator==(const Allocation&) const = default;
};

namespace detail {

inline bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace detail

/// Checks every scenario invariant and returns one message per violation,
/// each prefixed with the path of the offending field. Empty result means the
/// scenario is valid. Violations are data, not failures: nothing throws.
inline std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> out;
  auto flag = [&out](const std::string& path, const std::string& what) {
    out.push_back(path + ": " + what);
  };

  const int K = s.resource_count();
  if (s.providers.empty()) flag("providers", "scenario needs at least one provider");
  if (K == 0) flag("resource_kinds", "scenario needs at least one resource kind");

  for (int k = 0; k < K; ++k) {
    if (s.resource_kinds[k].index != k) {
      flag("resource_kinds[" + std::to_string(k) + "].index",
           "expected dense index " + std::to_string(k) + ", got " +
               std::to_string(s.resource_kinds[k].index));
    }
  }

  std::set<int> app_ids;
  for (int pi = 0; pi < s.provider_count(); ++pi) {
    const ProviderSpec& p = s.providers[pi];
    const std::string ppath = "providers[" + std::to_string(pi) + "]";
    if (p.id != pi) {
      flag(ppath + ".id", "expected dense provider id " + std::to_string(pi) +
                              ", got " + std::to_string(p.id));
    }
    if (static_cast<int>(p.capacity.size()) != K) {
      flag(ppath + ".capacity", "expected " + std::to_string(K) + " entries, got " +
                                    std::to_string(p.capacity.size()));
    }
    for (std::size_t k = 0; k < p.capacity.size(); ++k) {
      if (!detail::finite_nonneg(p.capacity[k])) {
        flag(ppath + ".capacity[" + std::to_string(k) + "]",
             "must be finite and non-negative");
      }
    }
    if (!detail::finite_nonneg(p.weight_native))
      flag(ppath + ".weight_native", "must be finite and non-negative");
    if (!detail::finite_nonneg(p.weight_foreign))
      flag(ppath + ".weight_foreign", "must be finite and non-negative");
    if (p.utility.family == UtilityFamily::Sigmoidal &&
        !(std::isfinite(p.utility.mu) && p.utility.mu > 0.0)) {
      flag(ppath + ".utility.mu", "sigmoidal family needs mu > 0");
    }
    if (p.native_apps.empty()) flag(ppath + ".apps", "provider needs at least one app");

    for (std::size_t ai = 0; ai < p.native_apps.size(); ++ai) {
      const ApplicationSpec& app = p.native_apps[ai];
      const std::string apath = ppath + ".apps[" + std::to_string(ai) + "]";
      if (app.owner != p.id) {
        flag(apath + ".owner", "app " + std::to_string(app.id) +
                                   " listed under provider " + std::to_string(p.id) +
                                   " but claims owner " + std::to_string(app.owner));
      }
      if (!app_ids.insert(app.id).second) {
        flag(apath + ".id", "duplicate app id " + std::to_string(app.id));
      }
      if (static_cast<int>(app.request.size()) != K) {
        flag(apath + ".request", "expected " + std::to_string(K) + " entries, got " +
                                     std::to_string(app.request.size()));
      }
      bool any_positive = false;
      for (std::size_t k = 0; k < app.request.size(); ++k) {
        if (!detail::finite_nonneg(app.request[k])) {
          flag(apath + ".request[" + std::to_string(k) + "]",
               "must be finite and non-negative");
        } else if (app.request[k] > 0.0) {
          any_positive = true;
        }
      }
      if (!any_positive && !app.request.empty()) {
        flag(apath + ".request", "app " + std::to_string(app.id) +
                                     " requests nothing (all-zero request)");
      }
    }
  }
  return out;
}

/// Signed worst-case violation per constraint family; positive means violated.
struct ResidualReport {
  double capacity = 0.0;    // max over (n,k) of sum_i x - C
  double demand = 0.0;      // max over (i,k) of sum_n x - r
  double negativity = 0.0;  // max over entries of -x

  double worst() const { return std::max(capacity, std::max(demand, negativity)); }
  bool feasible(double tol) const { return worst() <= tol; }
};

/// Evaluates the three feasibility constraint families of an allocation
/// against a scenario. Throws on dimension mismatch, naming the axis.
inline ResidualReport feasibility_residuals(const Scenario& s, const Allocation& a) {
  const int N = s.provider_count();
  const int M = s.app_count();
  const int K = s.resource_count();
  if (a.providers != N) {
    throw std::invalid_argument("allocation provider axis is " +
                                std::to_string(a.providers) + ", scenario has " +
                                std::to_string(N));
  }
  if (a.apps != M) {
    throw std::invalid_argument("allocation app axis is " + std::to_string(a.apps) +
                                ", scenario has " + std::to_string(M));
  }
  if (a.resources != K) {
    throw std::invalid_argument("allocation resource axis is " +
                                std::to_string(a.resources) + ", scenario has " +
                                std::to_string(K));
  }

  ResidualReport r;
  r.capacity = -std::numeric_limits<double>::infinity();
  r.demand = -std::numeric_limits<double>::infinity();
  r.negativity = -std::numeric_limits<double>::infinity();

  for (int n = 0; n < N; ++n) {
    for (int k = 0; k < K; ++k) {
      double used = 0.0;
      for (int i = 0; i < M; ++i) used += a.at(n, i, k);
      r.capacity = std::max(r.capacity, used - s.providers[n].capacity[k]);
    }
  }
  const auto apps = app_table(s);
  for (const AppRef& app : apps) {
    const std::vector<double>& req = request_of(s, app);
    for (int k = 0; k < K; ++k) {
      double total = 0.0;
      for (int n = 0; n < N; ++n) total += a.at(n, app.index, k);
      r.demand = std::max(r.demand, total - req[k]);
    }
  }
  for (double v : a.x) r.negativity = std::max(r.negativity, -v);
  return r;
}

/// Bitmask helpers for coalitions over provider ids 0..N-1.
inline std::vector<int> coalition_members(std::uint32_t mask) {
  std::vector<int> members;
  for (int n = 0; mask != 0; ++n, mask >>= 1) {
    if (mask & 1u) members.push_back(n);
  }
  return members;
}

inline std::uint32_t coalition_mask(const std::vector<int>& members) {
  std::uint32_t mask = 0;
  for (int n : members) mask |= (1u << n);
  return mask;
}

inline std::string coalition_label(std::uint32_t mask) {
  std::string out = "{";
  bool first = true;
  for (int n : coalition_members(mask)) {
    if (!first) out += ", ";
    out += std::to_string(n);
    first = false;
  }
  return out + "}";
}

}  // namespace coalshare

#endif  // COALSHARE_MODEL_HPP
