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

#ifndef COALSHARE_GAME_HPP
#define COALSHARE_GAME_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "coalshare/model.hpp"
#include "coalshare/solver.hpp"

namespace coalshare {

/// One solved coalition: its value, the payoff split at the maximizer (length
/// N, zero outside the coalition), and the allocation when available (tables
/// read back from files carry only the numbers).
struct CoalitionEntry {
  double value = 0.0;
  std::vector<double> payoffs;
  std::shared_ptr<const Allocation> allocation;
  bool converged = true;
};

struct CoalitionValueTable {
  int n_players = 0;
  std::map<std::uint32_t, CoalitionEntry> entries;

  std::uint32_t full_mask() const { return (1u << n_players) - 1u; }
  bool has(std::uint32_t mask) const { return entries.count(mask) != 0; }
  double value(std::uint32_t mask) const {
    if (mask == 0) return 0.0;  // the empty coalition earns nothing
    auto it = entries.find(mask);
    if (it == entries.end()) {
      throw std::invalid_argument("coalition table has no entry for " + coalition_label(mask));
    }
    return it->second.value;
  }
  const CoalitionEntry& entry(std::uint32_t mask) const {
    auto it = entries.find(mask);
    if (it == entries.end()) {
      throw std::invalid_argument("coalition table has no entry for " + coalition_label(mask));
    }
    return it->second;
  }
  /// True when every non-empty subset of the player universe is present.
  bool complete() const {
    if (n_players <= 0 || n_players > 16) return false;
    for (std::uint32_t mask = 1; mask <= full_mask(); ++mask) {
      if (!has(mask)) return false;
    }
    return true;
  }
};

namespace detail {

inline void require_complete(const CoalitionValueTable& t, const char* what) {
  if (!t.complete()) {
    throw std::invalid_argument(std::string(what) +
                                ": coalition table is incomplete; run a full enumeration first");
  }
}

/// Absolute tolerance scaled by the magnitudes being compared, so solver
/// noise on large values is not mistaken for a theory violation.
inline double scaled_tol(double base, double a, double b) {
  return base * (1.0 + std::max(std::abs(a), std::abs(b)));
}

}  // namespace detail

/// Solves every non-empty coalition of the scenario's providers and collects
/// the values into a table. 2^N - 1 solves; the cap exists because that count
/// doubles per provider.
inline CoalitionValueTable enumerate_coalitions(const Scenario& s,
                                                const ObjectiveWeights& weights,
                                                const SolverSettings& settings = {},
                                                int max_n = 10) {
  const int N = s.provider_count();
  if (N > max_n) {
    throw std::invalid_argument(
        "enumerate_coalitions: scenario has " + std::to_string(N) +
        " providers, above the cap of " + std::to_string(max_n) +
        "; raise max_n explicitly to confirm a " +
        std::to_string((1u << N) - 1) + "-solve run");
  }
  if (N > 16) throw std::invalid_argument("enumerate_coalitions: more than 16 providers");

  CoalitionValueTable table;
  table.n_players = N;
  for (std::uint32_t mask = 1; mask <= ((1u << N) - 1u); ++mask) {
    SolveReport report = coalition_value(s, coalition_members(mask), weights, settings);
    CoalitionEntry entry;
    entry.value = report.objective;
    entry.payoffs = report.per_provider_payoff;
    entry.converged = report.converged;
    entry.allocation = std::make_shared<Allocation>(std::move(report.allocation));
    table.entries.emplace(mask, std::move(entry));
  }
  return table;
}

struct SuperadditivityViolation {
  std::uint32_t s1 = 0, s2 = 0;
  double lhs = 0.0;  // v(S1 ∪ S2)
  double rhs = 0.0;  // v(S1) + v(S2)
};

/// Checks v(S1 ∪ S2) ≥ v(S1) + v(S2) for every disjoint pair of non-empty
/// coalitions. Empty result means the merge inequality holds everywhere.
inline std::vector<SuperadditivityViolation> check_superadditivity(
    const CoalitionValueTable& t, double base_tol = 1e-6) {
  detail::require_complete(t, "check_superadditivity");
  std::vector<SuperadditivityViolation> violations;
  const std::uint32_t full = t.full_mask();
  for (std::uint32_t s1 = 1; s1 <= full; ++s1) {
    for (std::uint32_t s2 = s1 + 1; s2 <= full; ++s2) {
      if ((s1 & s2) != 0) continue;
      const double lhs = t.value(s1 | s2);
      const double rhs = t.value(s1) + t.value(s2);
      if (lhs < rhs - detail::scaled_tol(base_tol, lhs, rhs)) {
        violations.push_back({s1, s2, lhs, rhs});
      }
    }
  }
  return violations;
}

struct ConvexityViolation {
  std::uint32_t s1 = 0, s2 = 0;
  int player = 0;
  double marginal_s1 = 0.0;  // v(S1 ∪ {n}) − v(S1)
  double marginal_s2 = 0.0;  // v(S2 ∪ {n}) − v(S2)
};

/// Checks that each player's marginal contribution never shrinks as the host
/// coalition grows: v(S1 ∪ {n}) − v(S1) ≤ v(S2 ∪ {n}) − v(S2) for all
/// S1 ⊆ S2 ⊆ universe ∖ {n}, the empty set included.
inline std::vector<ConvexityViolation> check_convexity(const CoalitionValueTable& t,
                                                       double base_tol = 1e-6) {
  detail::require_complete(t, "check_convexity");
  std::vector<ConvexityViolation> violations;
  const std::uint32_t full = t.full_mask();
  for (int n = 0; n < t.n_players; ++n) {
    const std::uint32_t bit = 1u << n;
    const std::uint32_t rest = full & ~bit;
    // Walk every S2 ⊆ rest, then every submask S1 ⊆ S2.
    std::uint32_t s2 = rest;
    while (true) {
      const double m2 = t.value(s2 | bit) - t.value(s2);
      std::uint32_t s1 = s2;
      while (true) {
        const double m1 = t.value(s1 | bit) - t.value(s1);
        if (m1 > m2 + detail::scaled_tol(base_tol, m1, m2)) {
          violations.push_back({s1, s2, n, m1, m2});
        }
        if (s1 == 0) break;
        s1 = (s1 - 1) & s2;
      }
      if (s2 == 0) break;
      s2 = (s2 - 1) & rest;
    }
  }
  return violations;
}

struct CoreCheck {
  bool in_core = false;
  bool individually_rational = false;
  bool group_rational = false;
  std::vector<std::uint32_t> blocking_coalitions;
};

/// Tests whether a grand-coalition payoff vector sits in the core: it must be
/// an imputation (each player at least its singleton value; payoffs summing
/// to the grand value), and no proper coalition's stored payoff split may
/// make every one of its members strictly better off.
inline CoreCheck check_core_membership(const CoalitionValueTable& t,
                                       const std::vector<double>& grand_payoffs,
                                       double base_tol = 1e-6) {
  detail::require_complete(t, "check_core_membership");
  if (static_cast<int>(grand_payoffs.size()) != t.n_players) {
    throw std::invalid_argument(
        "check_core_membership: payoff vector length " +
        std::to_string(grand_payoffs.size()) + " does not match " +
        std::to_string(t.n_players) + " players");
  }

  CoreCheck result;
  const std::uint32_t full = t.full_mask();

  result.individually_rational = true;
  for (int n = 0; n < t.n_players; ++n) {
    const double vn = t.value(1u << n);
    if (grand_payoffs[n] < vn - detail::scaled_tol(base_tol, grand_payoffs[n], vn)) {
      result.individually_rational = false;
    }
  }

  double total = 0.0;
  for (double p : grand_payoffs) total += p;
  const double grand_value = t.value(full);
  result.group_rational =
      std::abs(total - grand_value) <= detail::scaled_tol(base_tol, total, grand_value);

  for (std::uint32_t mask = 1; mask < full; ++mask) {
    const CoalitionEntry& entry = t.entry(mask);
    if (entry.payoffs.size() < static_cast<std::size_t>(t.n_players)) {
      throw std::invalid_argument("check_core_membership: entry for " + coalition_label(mask) +
                                  " is missing per-player payoffs");
    }
    bool all_strictly_better = true;
    for (int n : coalition_members(mask)) {
      const double offer = entry.payoffs[n];
      const double kept = grand_payoffs[n];
      if (offer <= kept + detail::scaled_tol(base_tol, offer, kept)) {
        all_strictly_better = false;
        break;
      }
    }
    if (all_strictly_better) result.blocking_coalitions.push_back(mask);
  }

  result.in_core = result.individually_rational && result.group_rational &&
                   result.blocking_coalitions.empty();
  return result;
}

/// Weak Pareto dominance with a strict part: a dominates b when a ≥ b in
/// every component and beats it in at least one.
inline bool pareto_dominates(const std::vector<double>& f_a, const std::vector<double>& f_b) {
  if (f_a.size() != f_b.size()) {
    throw std::invalid_argument("pareto_dominates: vectors differ in length");
  }
  bool strict = false;
  for (std::size_t i = 0; i < f_a.size(); ++i) {
    if (f_a[i] < f_b[i]) return false;
    if (f_a[i] > f_b[i]) strict = true;
  }
  return strict;
}

}  // namespace coalshare

#endif  // COALSHARE_GAME_HPP
