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
// Command-line front end: scenario generation, standalone/coalition solves,
// full enumeration, property verification, and CSV report emission.
//
// Exit codes: 0 = success, 1 = operational error (bad input, unreadable file,
// solver non-convergence), 2 = property violation (a game-theoretic check
// failed beyond tolerance).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coalshare/coalshare.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOperational = 1;
constexpr int kExitPropertyViolation = 2;

struct RunConfig {
  enum class Command { None, Generate, SolveAlone, SolveCoalition, Enumerate, Verify, Report };
  Command command = Command::None;

  std::string scenario_path;
  std::string output_path;
  std::string table_path;

  coalshare::SolverSettings settings;
  std::uint64_t seed = 0;

  // generate
  int preset = 0;
  coalshare::GeneratorConfig gen;
  std::string family = "sigmoidal";

  // solve-alone / solve-coalition
  int provider = -1;
  std::string coalition_spec;

  // enumerate / verify
  int max_n = 10;
  double check_tol = 1e-6;
  bool with_oracle = false;
  double grid_step = 0.25;
};

std::string fmt(double v) { return coalshare::detail::format_number(v); }

coalshare::Scenario load_or_die(const std::string& path) {
  coalshare::Scenario s = coalshare::load_scenario(path);
  const std::vector<std::string> violations = coalshare::validate_scenario(s);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "scenario " << path << " is invalid:";
    for (const std::string& v : violations) msg << "\n  - " << v;
    throw std::runtime_error(msg.str());
  }
  return s;
}

std::vector<int> parse_coalition_spec(const std::string& spec) {
  std::vector<int> members;
  std::istringstream in(spec);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      members.push_back(n);
    } catch (const std::exception&) {
      throw std::runtime_error("cannot parse coalition member '" + tok + "' in '" + spec + "'");
    }
  }
  if (members.empty()) throw std::runtime_error("coalition list is empty");
  return members;
}

int run_generate(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  if (cfg.family == "sigmoidal") {
    cfg.gen.utility.family = coalshare::UtilityFamily::Sigmoidal;
  } else if (cfg.family == "linear") {
    cfg.gen.utility.family = coalshare::UtilityFamily::Linear;
  } else {
    throw std::runtime_error("unknown utility family '" + cfg.family + "'");
  }

  coalshare::Scenario s = coalshare::generate_scenario(cfg.gen, cfg.seed);
  const std::vector<std::string> violations = coalshare::validate_scenario(s);
  if (!violations.empty()) {
    throw std::runtime_error("generated scenario failed validation: " + violations.front());
  }
  coalshare::save_scenario(s, cfg.output_path);
  std::cout << "wrote " << cfg.output_path << ": " << s.provider_count() << " providers, "
            << s.app_count() << " apps, " << s.resource_count()
            << " resource kinds, seed " << cfg.seed << "\n";
  return kExitOk;
}

int run_solve_alone(const RunConfig& cfg) {
  const coalshare::Scenario s = load_or_die(cfg.scenario_path);
  std::vector<int> targets;
  if (cfg.provider >= 0) {
    targets.push_back(cfg.provider);
  } else {
    for (int n = 0; n < s.provider_count(); ++n) targets.push_back(n);
  }

  bool all_converged = true;
  std::ostringstream csv;
  csv << "provider,value,converged\n";
  for (int n : targets) {
    const coalshare::SolveReport report = coalshare::solve_standalone(s, n, cfg.settings);
    all_converged = all_converged && report.converged;
    std::cout << "provider " << n << ": standalone value " << fmt(report.objective)
              << (report.converged ? "" : "  [not converged]") << "\n";
    csv << n << ',' << fmt(report.objective) << ',' << (report.converged ? 1 : 0) << '\n';
  }
  if (!cfg.output_path.empty()) {
    std::ofstream out(cfg.output_path);
    if (!out) throw std::runtime_error("cannot open for writing: " + cfg.output_path);
    out << csv.str();
    std::cout << "wrote " << cfg.output_path << "\n";
  }
  return all_converged ? kExitOk : kExitOperational;
}

int run_solve_coalition(const RunConfig& cfg) {
  const coalshare::Scenario s = load_or_die(cfg.scenario_path);
  const std::vector<int> members = parse_coalition_spec(cfg.coalition_spec);
  const coalshare::ObjectiveWeights weights = coalshare::scenario_weights(s);
  const coalshare::SolveReport report =
      coalshare::coalition_value(s, members, weights, cfg.settings);

  const std::uint32_t mask = coalshare::coalition_mask(members);
  std::cout << "coalition " << coalshare::coalition_label(mask) << ": value "
            << fmt(report.objective) << (report.converged ? "" : "  [not converged]") << "\n";
  for (int n : members) {
    std::cout << "  payoff[" << n << "] = " << fmt(report.per_provider_payoff[n]) << "\n";
  }

  if (!cfg.output_path.empty()) {
    coalshare::CoalitionValueTable table;
    table.n_players = s.provider_count();
    coalshare::CoalitionEntry entry;
    entry.value = report.objective;
    entry.payoffs = report.per_provider_payoff;
    entry.converged = report.converged;
    table.entries.emplace(mask, std::move(entry));
    coalshare::save_coalition_table(cfg.output_path, table);
    std::cout << "wrote " << cfg.output_path << "\n";
  }
  return report.converged ? kExitOk : kExitOperational;
}

int run_enumerate(const RunConfig& cfg) {
  const coalshare::Scenario s = load_or_die(cfg.scenario_path);
  const coalshare::ObjectiveWeights weights = coalshare::scenario_weights(s);
  const coalshare::CoalitionValueTable table =
      coalshare::enumerate_coalitions(s, weights, cfg.settings, cfg.max_n);

  bool all_converged = true;
  for (const auto& [mask, entry] : table.entries) {
    std::cout << coalshare::coalition_label(mask) << ": " << fmt(entry.value)
              << (entry.converged ? "" : "  [not converged]") << "\n";
    all_converged = all_converged && entry.converged;
  }
  if (!cfg.output_path.empty()) {
    coalshare::save_coalition_table(cfg.output_path, table);
    std::cout << "wrote " << cfg.output_path << " (" << table.entries.size() << " coalitions)\n";
  }
  return all_converged ? kExitOk : kExitOperational;
}

/// Runs the three property checks against a table and candidate grand
/// payoffs; prints findings and returns the number of violations.
int report_property_checks(const coalshare::CoalitionValueTable& table,
                           const std::vector<double>& grand_payoffs, double tol) {
  int violations = 0;

  const auto super = coalshare::check_superadditivity(table, tol);
  if (super.empty()) {
    std::cout << "superadditivity: OK\n";
  } else {
    violations += static_cast<int>(super.size());
    std::cout << "superadditivity: " << super.size() << " violation(s)\n";
    for (const auto& v : super) {
      std::cout << "  v(" << coalshare::coalition_label(v.s1 | v.s2) << ") = " << fmt(v.lhs)
                << " < v(" << coalshare::coalition_label(v.s1) << ") + v("
                << coalshare::coalition_label(v.s2) << ") = " << fmt(v.rhs) << "\n";
    }
  }

  const auto convex = coalshare::check_convexity(table, tol);
  if (convex.empty()) {
    std::cout << "convexity: OK\n";
  } else {
    violations += static_cast<int>(convex.size());
    std::cout << "convexity: " << convex.size() << " violation(s)\n";
    for (const auto& v : convex) {
      std::cout << "  player " << v.player << ": marginal in "
                << coalshare::coalition_label(v.s1) << " = " << fmt(v.marginal_s1)
                << " exceeds marginal in " << coalshare::coalition_label(v.s2) << " = "
                << fmt(v.marginal_s2) << "\n";
    }
  }

  const coalshare::CoreCheck core = coalshare::check_core_membership(table, grand_payoffs, tol);
  if (core.in_core) {
    std::cout << "core membership: OK\n";
  } else {
    ++violations;
    std::cout << "core membership: FAILED";
    if (!core.individually_rational) std::cout << " [not individually rational]";
    if (!core.group_rational) std::cout << " [not group rational]";
    std::cout << "\n";
    for (std::uint32_t mask : core.blocking_coalitions) {
      std::cout << "  blocked by " << coalshare::coalition_label(mask) << "\n";
    }
  }
  return violations;
}

int run_verify_table(const RunConfig& cfg) {
  const coalshare::CoalitionValueTable table = coalshare::load_coalition_table(cfg.table_path);
  if (!table.complete()) {
    throw std::runtime_error("table " + cfg.table_path +
                             " does not cover every non-empty coalition");
  }
  const coalshare::CoalitionEntry& grand = table.entry(table.full_mask());
  std::cout << "checking table " << cfg.table_path << " (" << table.n_players
            << " players, grand payoffs from the " << coalshare::coalition_label(table.full_mask())
            << " row)\n";
  const int violations = report_property_checks(table, grand.payoffs, cfg.check_tol);
  return violations == 0 ? kExitOk : kExitPropertyViolation;
}

int run_verify_scenario(const RunConfig& cfg) {
  const coalshare::Scenario s = load_or_die(cfg.scenario_path);
  const coalshare::ObjectiveWeights weights = coalshare::scenario_weights(s);

  const coalshare::CoalitionValueTable table =
      coalshare::enumerate_coalitions(s, weights, cfg.settings, cfg.max_n);
  const coalshare::CoreSolveReport core =
      coalshare::solve_core_allocation(s, weights, cfg.settings);

  bool all_converged = core.grand.converged;
  for (const auto& [mask, entry] : table.entries) all_converged = all_converged && entry.converged;
  for (const auto& r : core.standalone_reports) all_converged = all_converged && r.converged;
  if (!all_converged) {
    std::cerr << "error: a solve did not converge; property checks would be meaningless\n";
    return kExitOperational;
  }

  int violations = report_property_checks(table, core.grand.per_provider_payoff, cfg.check_tol);

  // Theorem-level rationality of the full pipeline's own output.
  bool rational = true;
  for (int n = 0; n < s.provider_count(); ++n) {
    const double bound = core.standalone_values[n];
    if (core.grand.per_provider_payoff[n] <
        bound - cfg.check_tol * (1.0 + std::abs(bound))) {
      rational = false;
      std::cout << "individual rationality: provider " << n << " gets "
                << fmt(core.grand.per_provider_payoff[n]) << " < standalone "
                << fmt(bound) << "\n";
    }
  }
  double payoff_sum = 0.0;
  for (double p : core.grand.per_provider_payoff) payoff_sum += p;
  if (std::abs(payoff_sum - core.grand.objective) >
      cfg.check_tol * (1.0 + std::abs(core.grand.objective))) {
    rational = false;
    std::cout << "group rationality: payoffs sum to " << fmt(payoff_sum)
              << " but the objective is " << fmt(core.grand.objective) << "\n";
  }
  std::cout << "rationality of the computed allocation: " << (rational ? "OK" : "FAILED") << "\n";
  if (!rational) ++violations;

  if (cfg.with_oracle) {
    coalshare::GridSpec grid;
    grid.step = cfg.grid_step;
    int oracle_mismatches = 0;
    for (const auto& [mask, entry] : table.entries) {
      const coalshare::OracleResult ref =
          coalshare::oracle_maximize(s, coalshare::coalition_members(mask), weights, grid);
      const double gap = ref.value - entry.value;
      const double allowed = std::max(1e-3, 0.01 * std::abs(ref.value));
      if (gap > allowed) {
        ++oracle_mismatches;
        std::cout << "oracle gap at " << coalshare::coalition_label(mask) << ": solver "
                  << fmt(entry.value) << " vs grid " << fmt(ref.value) << "\n";
      }
    }
    if (oracle_mismatches == 0) {
      std::cout << "oracle cross-check: OK\n";
    } else {
      violations += oracle_mismatches;
      std::cout << "oracle cross-check: " << oracle_mismatches << " gap(s) beyond tolerance\n";
    }
  }

  return violations == 0 ? kExitOk : kExitPropertyViolation;
}

int run_report(const RunConfig& cfg) {
  const coalshare::Scenario s = load_or_die(cfg.scenario_path);
  const coalshare::ObjectiveWeights weights = coalshare::scenario_weights(s);

  const coalshare::CoalitionValueTable table =
      coalshare::enumerate_coalitions(s, weights, cfg.settings, cfg.max_n);
  const coalshare::CoreSolveReport core =
      coalshare::solve_core_allocation(s, weights, cfg.settings);
  const coalshare::MetricsReport metrics = coalshare::build_metrics_report(s, core);

  const std::string coalition_path = cfg.output_path + "_coalitions.csv";
  const std::string metrics_path = cfg.output_path + "_metrics.csv";
  coalshare::save_coalition_table(coalition_path, table);
  coalshare::save_metrics_report(metrics_path, metrics);
  std::cout << "wrote " << coalition_path << " (" << table.entries.size() << " coalitions)\n";
  std::cout << "wrote " << metrics_path << " (" << metrics.per_provider.size()
            << " providers)\n";

  bool all_converged = core.grand.converged;
  for (const auto& [mask, entry] : table.entries) all_converged = all_converged && entry.converged;
  if (!all_converged) {
    std::cerr << "warning: at least one solve did not converge\n";
    return kExitOperational;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"coalition resource-sharing engine"};
  app.require_subcommand(1);

  auto add_solver_flags = [&cfg](CLI::App* cmd) {
    cmd->add_option("--seed", cfg.settings.seed, "seed for the solver's random restarts");
    cmd->add_option("--max-iters", cfg.settings.max_iters, "ascent iteration cap per start");
    cmd->add_option("--multistarts", cfg.settings.multistarts, "number of start points");
    cmd->add_option("--step-init", cfg.settings.step_init, "initial line-search step");
    cmd->add_option("--tol", cfg.settings.tol_kkt, "projected-gradient stopping tolerance");
    cmd->add_option("--ir-tol", cfg.settings.ir_tolerance,
                    "slack allowed on the standalone lower bounds");
  };

  CLI::App* generate = app.add_subcommand("generate", "write a random scenario file");
  generate->add_option("--out", cfg.output_path, "scenario file to write")->required();
  generate->add_option("--seed", cfg.seed, "generator seed (recorded in the file)");
  generate->add_option("--preset", cfg.preset, "bundled network size 1-4")
      ->check(CLI::Range(1, 4));
  auto* opt_n = generate->add_option("--n", cfg.gen.providers, "number of providers");
  auto* opt_apps =
      generate->add_option("--apps", cfg.gen.apps_per_provider, "apps per provider");
  auto* opt_k = generate->add_option("--k", cfg.gen.resources, "number of resource kinds");
  generate->add_option("--mu", cfg.gen.utility.mu, "sigmoid steepness")
      ->check(CLI::IsMember({0.01, 0.1}));
  generate->add_option("--family", cfg.family, "utility family: sigmoidal or linear")
      ->check(CLI::IsMember({"sigmoidal", "linear"}));
  generate->add_option("--request-low", cfg.gen.request_low, "request range lower end");
  generate->add_option("--request-high", cfg.gen.request_high, "request range upper end");
  generate->add_option("--deficit-low", cfg.gen.deficit_low, "deficit capacity multiplier low");
  generate->add_option("--deficit-high", cfg.gen.deficit_high, "deficit capacity multiplier high");
  generate->add_option("--surplus-low", cfg.gen.surplus_low, "surplus capacity multiplier low");
  generate->add_option("--surplus-high", cfg.gen.surplus_high, "surplus capacity multiplier high");
  generate->add_option("--deficit-count", cfg.gen.deficit_count,
                       "how many providers run a capacity deficit (-1 = N/3, at least 1)");

  CLI::App* solve_alone = app.add_subcommand("solve-alone", "solve each provider on its own");
  solve_alone->add_option("--scenario", cfg.scenario_path, "scenario file")->required();
  solve_alone->add_option("--provider", cfg.provider, "restrict to one provider id");
  solve_alone->add_option("--out", cfg.output_path, "CSV file for the standalone values");
  add_solver_flags(solve_alone);

  CLI::App* solve_coalition =
      app.add_subcommand("solve-coalition", "solve one coalition's pooled problem");
  solve_coalition->add_option("--scenario", cfg.scenario_path, "scenario file")->required();
  solve_coalition
      ->add_option("--coalition", cfg.coalition_spec, "comma-separated provider ids, e.g. 0,2")
      ->required();
  solve_coalition->add_option("--out", cfg.output_path, "CSV file for the value table row");
  add_solver_flags(solve_coalition);

  CLI::App* enumerate = app.add_subcommand("enumerate", "solve every coalition");
  enumerate->add_option("--scenario", cfg.scenario_path, "scenario file")->required();
  enumerate->add_option("--out", cfg.output_path, "coalition CSV to write");
  enumerate->add_option("--max-n", cfg.max_n, "refuse enumeration beyond this many providers");
  add_solver_flags(enumerate);

  CLI::App* verify =
      app.add_subcommand("verify", "check superadditivity, convexity, and core membership");
  auto* verify_scenario =
      verify->add_option("--scenario", cfg.scenario_path, "scenario file to solve and check");
  auto* verify_table =
      verify->add_option("--table", cfg.table_path, "existing coalition CSV to audit");
  verify_scenario->excludes(verify_table);
  verify_table->excludes(verify_scenario);
  verify->add_option("--max-n", cfg.max_n, "refuse enumeration beyond this many providers");
  verify->add_option("--tol", cfg.check_tol, "base tolerance for the property checks");
  verify->add_flag("--oracle", cfg.with_oracle,
                   "cross-check every coalition value against the grid oracle (tiny scenarios)");
  verify->add_option("--step", cfg.grid_step, "grid step for the oracle cross-check");
  verify->add_option("--seed", cfg.settings.seed, "seed for the solver's random restarts");
  verify->add_option("--max-iters", cfg.settings.max_iters, "ascent iteration cap per start");
  verify->add_option("--multistarts", cfg.settings.multistarts, "number of start points");
  verify->add_option("--step-init", cfg.settings.step_init, "initial line-search step");
  verify->add_option("--ir-tol", cfg.settings.ir_tolerance,
                     "slack allowed on the standalone lower bounds");

  CLI::App* report = app.add_subcommand("report", "emit the coalition and metrics CSV reports");
  report->add_option("--scenario", cfg.scenario_path, "scenario file")->required();
  report->add_option("--out", cfg.output_path, "output base path (suffixes are added)")
      ->required();
  report->add_option("--max-n", cfg.max_n, "refuse enumeration beyond this many providers");
  add_solver_flags(report);

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      if (cfg.preset != 0) {
        coalshare::GeneratorConfig base = coalshare::preset_config(cfg.preset);
        if (opt_n->count() == 0) cfg.gen.providers = base.providers;
        if (opt_apps->count() == 0) cfg.gen.apps_per_provider = base.apps_per_provider;
        if (opt_k->count() == 0) cfg.gen.resources = base.resources;
      }
      return run_generate(cfg);
    }
    if (solve_alone->parsed()) return run_solve_alone(cfg);
    if (solve_coalition->parsed()) return run_solve_coalition(cfg);
    if (enumerate->parsed()) return run_enumerate(cfg);
    if (verify->parsed()) {
      if (!cfg.table_path.empty()) return run_verify_table(cfg);
      if (!cfg.scenario_path.empty()) return run_verify_scenario(cfg);
      std::cerr << "error: verify needs --scenario or --table\n";
      return kExitOperational;
    }
    if (report->parsed()) return run_report(cfg);
    std::cerr << "error: no command given\n";
    return kExitOperational;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOperational;
  }
}
