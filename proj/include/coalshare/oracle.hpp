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

#ifndef COALSHARE_ORACLE_HPP
#define COALSHARE_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "coalshare/model.hpp"
#include "coalshare/utility.hpp"

namespace coalshare {

/// Grid used by the brute-force optimizer. The lattice per decision variable
/// is every multiple of `step` up to the variable's bound, plus the bound
/// itself. When every request and capacity is an integer multiple of `step`,
/// the lattice contains every vertex of the feasible polytope, and since both
/// utility families are convex on [0, request] the sweep then finds an exact
/// optimum. On other data it is a plain grid approximation.
struct GridSpec {
  double step = 0.25;
  double max_cells = 2e7;  // refuse instances whose lattice product exceeds this
};

struct OracleResult {
  double value = 0.0;
  std::vector<double> payoffs;  // size N, zero for non-members
  Allocation allocation;
};

namespace detail {

struct OracleVar {
  int member = 0;  // provider id
  int app = 0;     // global app index
  int k = 0;
  std::vector<double> levels;  // ascending, starts at 0
  double util_delta_scale = 0.0;  // gamma weight on the utility term
  double inv_request = 0.0;
  const UtilityConfig* cfg = nullptr;
  double request = 0.0;
};

inline std::vector<double> lattice_levels(double step, double request, double capacity) {
  const double ub = std::min(request, capacity);
  std::vector<double> levels;
  for (double v = 0.0; v < ub - 1e-12; v += step) levels.push_back(v);
  levels.push_back(ub);
  return levels;
}

// Exhaustive depth-first sweep of the lattice inside the feasible polytope.
// Branches are cut as soon as a prefix breaks a capacity or demand cap, which
// is sound because levels ascend. The first-found maximum wins ties, which is
// the lexicographically smallest argmax; the reduction is therefore
// independent of any enumeration partitioning.
class GridSearch {
 public:
  GridSearch(const Scenario& s, std::vector<int> members, const ObjectiveWeights& weights,
             bool unit_weights, const GridSpec& grid)
      : scenario_(s), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
      throw std::invalid_argument("coalition lists a provider twice");
    }
    const int K = s.resource_count();
    const auto apps = app_table(s);

    for (const AppRef& app : apps) {
      if (std::binary_search(members_.begin(), members_.end(), app.owner)) {
        apps_.push_back(app);
      }
    }

    double cells = 1.0;
    for (int m : members_) {
      const ProviderSpec& p = s.providers[m];
      for (const AppRef& app : apps_) {
        const std::vector<double>& req = request_of(s, app);
        for (int k = 0; k < K; ++k) {
          const double gamma =
              unit_weights ? 1.0 : (app.owner == m ? weights.w[m] : weights.zeta[m]);
          baseline_ += gamma * detail::family_term(p.utility, 0.0, req[k]);
          const double ub = std::min(req[k], p.capacity[k]);
          if (ub <= 0.0) continue;
          OracleVar var;
          var.member = m;
          var.app = app.index;
          var.k = k;
          var.levels = lattice_levels(grid.step, req[k], p.capacity[k]);
          var.util_delta_scale = gamma;
          var.inv_request = req[k] > 0.0 ? 1.0 / req[k] : 0.0;
          var.cfg = &p.utility;
          var.request = req[k];
          cells *= static_cast<double>(var.levels.size());
          vars_.push_back(std::move(var));
        }
      }
    }
    if (cells > grid.max_cells) {
      throw std::runtime_error("oracle grid too large: about " +
                               std::to_string(static_cast<long long>(cells)) +
                               " cells exceeds the limit of " +
                               std::to_string(static_cast<long long>(grid.max_cells)));
    }

    cap_used_.assign(static_cast<std::size_t>(s.provider_count()) * K, 0.0);
    demand_used_.assign(static_cast<std::size_t>(s.app_count()) * K, 0.0);
    current_.assign(vars_.size(), 0.0);
    best_levels_.assign(vars_.size(), 0.0);
  }

  /// Runs the sweep. `accept` may reject leaves (used for the rationality
  /// filter); it receives the per-provider payoff vector at the leaf.
  template <typename Accept>
  bool run(Accept&& accept) {
    found_ = false;
    dfs(0, baseline_, std::forward<Accept>(accept));
    return found_;
  }

  double best_value() const { return best_value_; }

  Allocation best_allocation() const {
    Allocation a = Allocation::zeros(scenario_, members_);
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      a.at(vars_[v].member, vars_[v].app, vars_[v].k) = best_levels_[v];
    }
    return a;
  }

  std::size_t free_variables() const { return vars_.size(); }

  /// Writes a level vector (as handed to the accept callback) into `a`.
  /// Variables not in the free set stay untouched, so pass a zeroed target.
  void apply_levels(const std::vector<double>& levels, Allocation& a) const {
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      a.at(vars_[v].member, vars_[v].app, vars_[v].k) = levels[v];
    }
  }

 private:
  template <typename Accept>
  void dfs(std::size_t depth, double value, Accept&& accept) {
    if (depth == vars_.size()) {
      if (found_ && value <= best_value_) return;
      if (!accept(current_)) return;
      best_value_ = value;
      best_levels_ = current_;
      found_ = true;
      return;
    }
    const OracleVar& var = vars_[depth];
    const int K = scenario_.resource_count();
    const std::size_t ci = static_cast<std::size_t>(var.member) * K + var.k;
    const std::size_t di = static_cast<std::size_t>(var.app) * K + var.k;
    const double cap = scenario_.providers[var.member].capacity[var.k];
    const double phi0 = detail::family_term(*var.cfg, 0.0, var.request);

    for (double level : var.levels) {
      if (cap_used_[ci] + level > cap + 1e-9) break;
      if (demand_used_[di] + level > var.request + 1e-9) break;
      cap_used_[ci] += level;
      demand_used_[di] += level;
      current_[depth] = level;
      const double gain =
          var.util_delta_scale * (detail::family_term(*var.cfg, level, var.request) - phi0) +
          level * var.inv_request;
      dfs(depth + 1, value + gain, std::forward<Accept>(accept));
      cap_used_[ci] -= level;
      demand_used_[di] -= level;
      current_[depth] = 0.0;
    }
  }

  const Scenario& scenario_;
  std::vector<int> members_;
  std::vector<AppRef> apps_;
  std::vector<OracleVar> vars_;
  double baseline_ = 0.0;
  std::vector<double> cap_used_, demand_used_, current_, best_levels_;
  double best_value_ = 0.0;
  bool found_ = false;
};

}  // namespace detail

/// Exhaustive lattice maximization of the coalition objective for a tiny
/// instance. Ground truth for solver validation; refuses anything outside toy
/// scale via the cell guard.
inline OracleResult oracle_maximize(const Scenario& s, const std::vector<int>& coalition,
                                    const ObjectiveWeights& weights,
                                    const GridSpec& grid = {}) {
  if (coalition.empty()) throw std::invalid_argument("oracle_maximize: empty coalition");
  for (int n : coalition) detail::check_provider_id(s, n, "oracle_maximize");
  if (static_cast<int>(weights.w.size()) != s.provider_count() ||
      static_cast<int>(weights.zeta.size()) != s.provider_count()) {
    throw std::invalid_argument("oracle_maximize: weight vectors must have one entry per provider");
  }
  detail::GridSearch search(s, coalition, weights, /*unit_weights=*/false, grid);
  search.run([](const std::vector<double>&) { return true; });

  OracleResult result;
  result.allocation = search.best_allocation();
  result.payoffs.assign(s.provider_count(), 0.0);
  std::vector<int> members = coalition;
  std::sort(members.begin(), members.end());
  double total = 0.0;
  for (int n : members) {
    result.payoffs[n] = provider_objective(s, result.allocation, n, members, weights);
    total += result.payoffs[n];
  }
  result.value = total;
  return result;
}

/// Exhaustive maximization of the standalone problem of one provider
/// (unweighted native utility plus the provider's own satisfaction term).
inline OracleResult oracle_standalone(const Scenario& s, int n, const GridSpec& grid = {}) {
  detail::check_provider_id(s, n, "oracle_standalone");
  const ObjectiveWeights unit = ObjectiveWeights::ones(s.provider_count());
  detail::GridSearch search(s, {n}, unit, /*unit_weights=*/true, grid);
  search.run([](const std::vector<double>&) { return true; });

  OracleResult result;
  result.allocation = search.best_allocation();
  result.payoffs.assign(s.provider_count(), 0.0);
  result.payoffs[n] = standalone_objective(s, result.allocation, n);
  result.value = result.payoffs[n];
  return result;
}

struct OracleCoreResult {
  std::vector<double> payoffs;          // size N
  double value = 0.0;                   // grand objective at the best point
  std::vector<double> singleton_values; // oracle standalone value per provider
  Allocation allocation;
};

/// Grid search over grand-coalition allocations keeping only points where
/// every provider does at least as well as its oracle standalone value, then
/// maximizing the grand objective over the survivors.
inline OracleCoreResult oracle_core_allocation(const Scenario& s,
                                               const ObjectiveWeights& weights,
                                               const GridSpec& grid = {}) {
  const int N = s.provider_count();
  if (N == 0) throw std::invalid_argument("oracle_core_allocation: empty scenario");
  if (static_cast<int>(weights.w.size()) != N || static_cast<int>(weights.zeta.size()) != N) {
    throw std::invalid_argument(
        "oracle_core_allocation: weight vectors must have one entry per provider");
  }

  OracleCoreResult result;
  result.singleton_values.resize(N);
  for (int n = 0; n < N; ++n) {
    result.singleton_values[n] = oracle_standalone(s, n, grid).value;
  }

  std::vector<int> everyone(N);
  for (int n = 0; n < N; ++n) everyone[n] = n;

  // Grid sweep with the individual-rationality filter. The payoff check needs
  // the full leaf allocation, so the filter reconstructs it from the level
  // vector via the search's variable order. Surviving leaves are tiny in
  // number under the cell guard, so the per-leaf evaluation cost is fine.
  detail::GridSearch search(s, everyone, weights, /*unit_weights=*/false, grid);
  Allocation probe = Allocation::zeros(s, everyone);
  const bool any = search.run([&](const std::vector<double>& levels) {
    search.apply_levels(levels, probe);
    for (int n = 0; n < N; ++n) {
      const double slack = 1e-9 * (1.0 + std::abs(result.singleton_values[n]));
      const double payoff = provider_objective(s, probe, n, everyone, weights);
      if (payoff < result.singleton_values[n] - slack) return false;
    }
    return true;
  });
  if (!any) {
    throw std::runtime_error(
        "oracle_core_allocation: no lattice point satisfies the rationality bounds; "
        "the grid step is too coarse for this instance");
  }

  result.allocation = search.best_allocation();
  result.payoffs.assign(N, 0.0);
  double total = 0.0;
  for (int n = 0; n < N; ++n) {
    result.payoffs[n] = provider_objective(s, result.allocation, n, everyone, weights);
    total += result.payoffs[n];
  }
  result.value = total;
  return result;
}

}  // namespace coalshare

#endif  // COALSHARE_ORACLE_HPP
