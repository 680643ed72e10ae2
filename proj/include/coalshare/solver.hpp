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

#ifndef COALSHARE_SOLVER_HPP
#define COALSHARE_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coalshare/model.hpp"
#include "coalshare/projection.hpp"
#include "coalshare/utility.hpp"

namespace coalshare {

struct SolverSettings {
  int max_iters = 5000;
  double step_init = 1.0;
  double tol_kkt = 1e-6;
  int multistarts = 8;
  double ir_tolerance = 1e-6;
  // Seed for the random multistart initializations. Not part of the scenario:
  // two runs with the same scenario, settings, and seed produce bit-identical
  // reports.
  std::uint64_t seed = 0;
};

struct SolveReport {
  Allocation allocation;
  double objective = 0.0;
  // One entry per provider in the scenario; zero for providers outside the
  // coalition. The objective is assembled as the sum of these entries, so the
  // group-rationality identity holds exactly by construction.
  std::vector<double> per_provider_payoff;
  ResidualReport residuals;
  // True when the run reached a stationary point: either the projected
  // gradient shrank below tol_kkt, or no ascent step of any tried length
  // improved the objective (the fixed-point certificate for the kinked
  // penalty objective). Core solves additionally require the rationality
  // bounds to hold.
  bool converged = false;
  int starts_used = 0;
  int iterations = 0;
};

/// Algorithm output for the full pipeline: the grand-coalition solve plus the
/// per-provider standalone solves that produced its lower bounds. The solve
/// count is exactly N+1.
struct CoreSolveReport {
  SolveReport grand;
  std::vector<double> standalone_values;
  std::vector<SolveReport> standalone_reports;
};

inline void validate_settings(const SolverSettings& st) {
  if (st.max_iters <= 0 || st.step_init <= 0.0 || st.tol_kkt <= 0.0 ||
      st.multistarts <= 0 || st.ir_tolerance <= 0.0) {
    throw std::invalid_argument("solver settings must all be positive");
  }
}

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(a) ^ b) ^ c);
}

/// Per-coalition problem geometry: the member set, the member-owned apps, and
/// one row/column-capped projector per resource kind. Instances carry scratch
/// buffers, so each solve owns its context (not shareable across threads).
class CoalitionContext {
 public:
  CoalitionContext(const Scenario& s, std::vector<int> members)
      : s_(&s), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (members_.empty()) throw std::invalid_argument("coalition must be non-empty");
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
      throw std::invalid_argument("coalition lists a provider twice");
    }
    for (int n : members_) check_provider_id(s, n, "coalition");

    for (const AppRef& app : app_table(s)) {
      if (std::binary_search(members_.begin(), members_.end(), app.owner)) {
        apps_.push_back(app);
      }
    }
    const int K = s.resource_count();
    projectors_.reserve(K);
    for (int k = 0; k < K; ++k) {
      std::vector<double> row_cap, col_cap;
      row_cap.reserve(members_.size());
      col_cap.reserve(apps_.size());
      for (int m : members_) row_cap.push_back(s.providers[m].capacity[k]);
      for (const AppRef& app : apps_) col_cap.push_back(request_of(s, app)[k]);
      projectors_.emplace_back(std::move(row_cap), std::move(col_cap));
    }
    slice_.resize(members_.size() * apps_.size());
  }

  const Scenario& scenario() const { return *s_; }
  const std::vector<int>& members() const { return members_; }
  const std::vector<AppRef>& apps() const { return apps_; }

  /// Projects the member block of `a` onto the capacity/demand/non-negativity
  /// polytope, one resource slice at a time (the constraints do not couple
  /// resource kinds).
  void project(Allocation& a) {
    const int K = s_->resource_count();
    const std::size_t A = apps_.size();
    for (int k = 0; k < K; ++k) {
      for (std::size_t mi = 0; mi < members_.size(); ++mi) {
        for (std::size_t ai = 0; ai < A; ++ai) {
          slice_[mi * A + ai] = a.at(members_[mi], apps_[ai].index, k);
        }
      }
      projectors_[k].project(slice_);
      for (std::size_t mi = 0; mi < members_.size(); ++mi) {
        for (std::size_t ai = 0; ai < A; ++ai) {
          a.at(members_[mi], apps_[ai].index, k) = slice_[mi * A + ai];
        }
      }
    }
  }

  /// Deterministic initial point: walking providers in ascending id order and
  /// apps in ascending global index, each (provider, app, resource) cell takes
  /// as much as remaining capacity and remaining demand allow. Lower indices
  /// are served first, which fixes the representative among equal-objective
  /// allocations on flat faces.
  Allocation greedy_start() const {
    Allocation a = Allocation::zeros(*s_, members_);
    const int K = s_->resource_count();
    std::vector<double> cap_rem, dem_rem;
    for (int m : members_) {
      for (int k = 0; k < K; ++k) cap_rem.push_back(s_->providers[m].capacity[k]);
    }
    for (const AppRef& app : apps_) {
      const std::vector<double>& req = request_of(*s_, app);
      for (int k = 0; k < K; ++k) dem_rem.push_back(req[k]);
    }
    for (std::size_t mi = 0; mi < members_.size(); ++mi) {
      for (std::size_t ai = 0; ai < apps_.size(); ++ai) {
        for (int k = 0; k < K; ++k) {
          const double give =
              std::min(cap_rem[mi * K + k], dem_rem[ai * K + k]);
          if (give <= 0.0) continue;
          a.at(members_[mi], apps_[ai].index, k) = give;
          cap_rem[mi * K + k] -= give;
          dem_rem[ai * K + k] -= give;
        }
      }
    }
    return a;
  }

  /// Random initial point: every cell of the demand-capped tensor
  /// min(request, capacity) scaled by an independent uniform draw, then
  /// projected to feasibility.
  Allocation random_start(std::mt19937_64& rng) {
    Allocation a = Allocation::zeros(*s_, members_);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const int K = s_->resource_count();
    for (int m : members_) {
      for (const AppRef& app : apps_) {
        const std::vector<double>& req = request_of(*s_, app);
        for (int k = 0; k < K; ++k) {
          const double ub = std::min(req[k], s_->providers[m].capacity[k]);
          if (ub > 0.0) a.at(m, app.index, k) = u01(rng) * ub;
        }
      }
    }
    project(a);
    return a;
  }

 private:
  const Scenario* s_;
  std::vector<int> members_;
  std::vector<AppRef> apps_;
  std::vector<CappedMatrixProjector> projectors_;
  std::vector<double> slice_;
};

/// Sum of member payoffs at `a`; fills `payoffs` (length N, non-members 0).
inline double coalition_total(const Scenario& s, const Allocation& a,
                              const std::vector<int>& members,
                              const ObjectiveWeights& weights,
                              std::vector<double>& payoffs) {
  payoffs.assign(s.provider_count(), 0.0);
  double total = 0.0;
  for (int n : members) {
    payoffs[n] = provider_objective(s, a, n, members, weights);
    total += payoffs[n];
  }
  return total;
}

/// Accumulates alpha * d(payoff of provider q)/dx into g over the coalition's
/// variables. The payoff of q depends on q's own allocations (through the
/// weighted utility terms, evaluated with q's utility family) and on every
/// member's allocation to q's native apps (through the fill-ratio term).
inline void add_payoff_gradient(const CoalitionContext& ctx, const Allocation& a,
                                int q, const ObjectiveWeights& weights,
                                double alpha, Allocation& g) {
  const Scenario& s = ctx.scenario();
  const int K = s.resource_count();
  const ProviderSpec& host = s.providers[q];
  for (const AppRef& app : ctx.apps()) {
    const std::vector<double>& req = request_of(s, app);
    const bool native = app.owner == q;
    const double gamma = native ? weights.w[q] : weights.zeta[q];
    for (int k = 0; k < K; ++k) {
      const double du =
          gamma * family_term_grad(host.utility, a.at(q, app.index, k), req[k]);
      if (du != 0.0) g.at(q, app.index, k) += alpha * du;
    }
    if (!native) continue;
    for (int m : ctx.members()) {
      for (int k = 0; k < K; ++k) {
        if (req[k] > 0.0) g.at(m, app.index, k) += alpha / req[k];
      }
    }
  }
}

struct AscentOutcome {
  double value = 0.0;
  int iterations = 0;
  bool stationary = false;
};

/// Projected gradient ascent with backtracking line search on the projection
/// arc. Accepted steps strictly increase the objective, so the value sequence
/// is non-decreasing by construction; `trace` (when given) records it.
template <typename ValueFn, typename GradFn>
AscentOutcome ascend(CoalitionContext& ctx, Allocation& x, ValueFn&& value_of,
                     GradFn&& grad_into, const SolverSettings& st,
                     std::vector<double>* trace = nullptr) {
  Allocation g = x;
  Allocation trial = x;
  const std::size_t sz = x.x.size();

  double fx = value_of(x);
  if (trace) trace->push_back(fx);
  double step = st.step_init;
  AscentOutcome out;
  int flat_steps = 0;

  for (int iter = 0; iter < st.max_iters; ++iter) {
    out.iterations = iter + 1;
    std::fill(g.x.begin(), g.x.end(), 0.0);
    grad_into(x, g);

    // Stationarity probe: the unit-step projected gradient.
    for (std::size_t t = 0; t < sz; ++t) trial.x[t] = x.x[t] + g.x[t];
    ctx.project(trial);
    double pg_sq = 0.0;
    for (std::size_t t = 0; t < sz; ++t) {
      const double d = trial.x[t] - x.x[t];
      pg_sq += d * d;
    }
    if (std::sqrt(pg_sq) < st.tol_kkt) {
      out.stationary = true;
      break;
    }

    bool accepted = false;
    double t_step = step;
    for (int bt = 0; bt < 60 && !accepted; ++bt) {
      for (std::size_t t = 0; t < sz; ++t) trial.x[t] = x.x[t] + t_step * g.x[t];
      ctx.project(trial);
      double predicted = 0.0;
      for (std::size_t t = 0; t < sz; ++t) {
        predicted += g.x[t] * (trial.x[t] - x.x[t]);
      }
      if (predicted > 0.0) {
        const double ft = value_of(trial);
        if (ft >= fx + 1e-4 * predicted) {
          // Diminishing-returns certificate: a run of accepted steps whose
          // gains sit at double-precision noise is an optimum in practice,
          // even while sigmoid tails keep the raw gradient slightly alive.
          if (ft - fx <= 1e-10 * (1.0 + std::abs(ft))) {
            ++flat_steps;
          } else {
            flat_steps = 0;
          }
          x.x.swap(trial.x);
          fx = ft;
          accepted = true;
          step = std::min(t_step * 2.0, 1e6);
          if (trace) trace->push_back(fx);
          break;
        }
      }
      t_step *= 0.5;
    }
    if (flat_steps >= 5) {
      out.stationary = true;
      break;
    }
    if (!accepted) {
      // No projected step of any tried length improves the objective: the
      // point is stationary up to line-search resolution (this is how runs
      // settle on the penalty kink, where the plain gradient never vanishes).
      out.stationary = true;
      break;
    }
  }
  out.value = fx;
  return out;
}

struct StartCandidate {
  Allocation x;
  double objective = 0.0;  // unpenalized coalition total
  std::vector<double> payoffs;
  bool ir_ok = true;
  bool stationary = false;
  int iterations = 0;
};

inline SolveReport assemble_report(const Scenario& s, const CoalitionContext& ctx,
                                   StartCandidate best, const ObjectiveWeights& weights,
                                   int starts_used) {
  SolveReport report;
  report.allocation = std::move(best.x);
  report.objective =
      coalition_total(s, report.allocation, ctx.members(), weights,
                      report.per_provider_payoff);
  report.residuals = feasibility_residuals(s, report.allocation);
  report.converged = best.stationary && best.ir_ok;
  report.starts_used = starts_used;
  report.iterations = best.iterations;
  return report;
}

}  // namespace detail

/// Maximizes the coalition objective (the sum of member payoffs under pooled
/// capacity, per-app demand caps, and non-negativity) from several start
/// points; returns the best stationary point found with its payoff split.
inline SolveReport coalition_value(const Scenario& s, const std::vector<int>& coalition,
                                   const ObjectiveWeights& weights,
                                   const SolverSettings& settings = {}) {
  validate_settings(settings);
  if (static_cast<int>(weights.w.size()) != s.provider_count() ||
      static_cast<int>(weights.zeta.size()) != s.provider_count()) {
    throw std::invalid_argument("coalition_value: weight vectors must have one entry per provider");
  }
  detail::CoalitionContext ctx(s, coalition);

  std::vector<double> payoff_scratch;
  auto value_of = [&](const Allocation& a) {
    return detail::coalition_total(s, a, ctx.members(), weights, payoff_scratch);
  };
  auto grad_into = [&](const Allocation& a, Allocation& g) {
    for (int n : ctx.members()) detail::add_payoff_gradient(ctx, a, n, weights, 1.0, g);
  };

  const std::uint64_t mask = coalition_mask(ctx.members());
  detail::StartCandidate best;
  bool have_best = false;
  int starts = 0;
  for (; starts < settings.multistarts; ++starts) {
    Allocation x = [&] {
      if (starts == 0) return ctx.greedy_start();
      std::mt19937_64 rng(detail::mix_seed(settings.seed, mask, starts));
      return ctx.random_start(rng);
    }();
    const detail::AscentOutcome outcome =
        detail::ascend(ctx, x, value_of, grad_into, settings);
    if (!have_best || outcome.value > best.objective) {
      best.x = std::move(x);
      best.objective = outcome.value;
      best.stationary = outcome.stationary;
      best.iterations = outcome.iterations;
      have_best = true;
    }
  }
  return detail::assemble_report(s, ctx, std::move(best), weights, starts);
}

/// Maximizes one provider's standalone objective (its utility from serving its
/// own apps out of its own capacity, plus its fill-ratio term). Equivalent to
/// the singleton coalition problem with unit weights.
inline SolveReport solve_standalone(const Scenario& s, int n,
                                    const SolverSettings& settings = {}) {
  detail::check_provider_id(s, n, "solve_standalone");
  return coalition_value(s, {n}, ObjectiveWeights::ones(s.provider_count()), settings);
}

/// Full pipeline: a standalone solve per provider fixes the lower bounds
/// v({n}); a final grand-coalition solve maximizes the pooled objective
/// subject to every provider keeping at least its standalone value. The
/// bounds enter through an exact penalty (coefficient 1e3, doubled on
/// residual violation up to 1e9), which preserves the simple projection
/// geometry of the constraint polytope.
inline CoreSolveReport solve_core_allocation(const Scenario& s,
                                             const ObjectiveWeights& weights,
                                             const SolverSettings& settings = {}) {
  validate_settings(settings);
  const int N = s.provider_count();
  if (static_cast<int>(weights.w.size()) != N ||
      static_cast<int>(weights.zeta.size()) != N) {
    throw std::invalid_argument(
        "solve_core_allocation: weight vectors must have one entry per provider");
  }

  CoreSolveReport result;
  result.standalone_reports.reserve(N);
  result.standalone_values.resize(N);
  for (int n = 0; n < N; ++n) {
    result.standalone_reports.push_back(solve_standalone(s, n, settings));
    result.standalone_values[n] = result.standalone_reports.back().objective;
  }
  const std::vector<double>& bounds = result.standalone_values;

  std::vector<int> everyone(N);
  for (int n = 0; n < N; ++n) everyone[n] = n;
  detail::CoalitionContext ctx(s, everyone);

  auto ir_slack = [&](int n) {
    return settings.ir_tolerance * (1.0 + std::abs(bounds[n]));
  };

  std::vector<double> payoff_scratch;
  double rho = 1e3;
  auto value_of = [&](const Allocation& a) {
    const double total =
        detail::coalition_total(s, a, ctx.members(), weights, payoff_scratch);
    double shortfall = 0.0;
    for (int n = 0; n < N; ++n) {
      shortfall += std::max(0.0, bounds[n] - payoff_scratch[n]);
    }
    return total - rho * shortfall;
  };
  auto grad_into = [&](const Allocation& a, Allocation& g) {
    detail::coalition_total(s, a, ctx.members(), weights, payoff_scratch);
    for (int n = 0; n < N; ++n) {
      const double alpha = payoff_scratch[n] < bounds[n] ? 1.0 + rho : 1.0;
      detail::add_payoff_gradient(ctx, a, n, weights, alpha, g);
    }
  };

  auto ir_satisfied = [&](const std::vector<double>& payoffs) {
    for (int n = 0; n < N; ++n) {
      if (payoffs[n] < bounds[n] - ir_slack(n)) return false;
    }
    return true;
  };

  const std::uint64_t mask = coalition_mask(everyone);
  detail::StartCandidate best;
  bool have_best = false;
  int starts = 0;
  for (; starts < settings.multistarts; ++starts) {
    // Start 0 glues the standalone optima together block by block: each
    // provider keeps serving exactly its own apps, so every rationality bound
    // already holds there and ascent only has to improve on it.
    Allocation x = [&]() -> Allocation {
      if (starts == 0) {
        Allocation glued = Allocation::zeros(s, everyone);
        for (int n = 0; n < N; ++n) {
          const Allocation& own = result.standalone_reports[n].allocation;
          for (std::size_t t = 0; t < glued.x.size(); ++t) {
            if (own.x[t] != 0.0) glued.x[t] = own.x[t];
          }
        }
        return glued;
      }
      if (starts == 1) return ctx.greedy_start();
      std::mt19937_64 rng(detail::mix_seed(settings.seed, mask, starts));
      return ctx.random_start(rng);
    }();

    rho = 1e3;
    detail::AscentOutcome outcome;
    std::vector<double> payoffs;
    while (true) {
      outcome = detail::ascend(ctx, x, value_of, grad_into, settings);
      detail::coalition_total(s, x, ctx.members(), weights, payoffs);
      if (ir_satisfied(payoffs) || rho >= 1e9) break;
      rho *= 2.0;  // tighten the penalty and continue from the same point
    }

    detail::StartCandidate cand;
    cand.x = std::move(x);
    cand.payoffs = payoffs;
    double total = 0.0;
    for (int n = 0; n < N; ++n) total += payoffs[n];
    cand.objective = total;
    cand.ir_ok = ir_satisfied(payoffs);
    cand.stationary = outcome.stationary;
    cand.iterations = outcome.iterations;

    const bool better =
        !have_best ||
        (cand.ir_ok && !best.ir_ok) ||
        (cand.ir_ok == best.ir_ok && cand.objective > best.objective);
    if (better) {
      best = std::move(cand);
      have_best = true;
    }
  }

  result.grand = detail::assemble_report(s, ctx, std::move(best), weights, starts);
  return result;
}

}  // namespace coalshare

#endif  // COALSHARE_SOLVER_HPP
