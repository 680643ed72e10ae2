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

#ifndef COALSHARE_REPORT_IO_HPP
#define COALSHARE_REPORT_IO_HPP

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "coalshare/game.hpp"
#include "coalshare/metrics.hpp"
#include "coalshare/model.hpp"

namespace coalshare {
namespace detail {

inline std::string format_number(double v) {
  std::ostringstream out;
  out << std::setprecision(12) << v;
  return out.str();
}

/// Splits one CSV line into fields, honoring double-quoted fields (quotes may
/// wrap a field containing commas; embedded quotes are not produced by the
/// writers here and are rejected).
inline std::vector<std::string> split_csv_line(const std::string& line, int line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      if (!cur.empty()) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": quote in the middle of a field");
      }
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c == '\r') {
      // tolerate CRLF line endings
    } else {
      cur += c;
    }
  }
  if (quoted) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": unterminated quote");
  }
  fields.push_back(cur);
  return fields;
}

inline double parse_csv_number(const std::string& field, int line_no, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": " + what +
                             " is not a number: '" + field + "'");
  }
}

/// Parses a coalition label of the form "{0, 2}" into a bitmask.
inline std::uint32_t parse_coalition_label(const std::string& label, int line_no) {
  if (label.size() < 2 || label.front() != '{' || label.back() != '}') {
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": coalition label must look like {0, 1}: '" + label + "'");
  }
  std::uint32_t mask = 0;
  std::string inner = label.substr(1, label.size() - 2);
  std::istringstream in(inner);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    std::size_t a = tok.find_first_not_of(" \t");
    std::size_t b = tok.find_last_not_of(" \t");
    if (a == std::string::npos) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": empty member in '" +
                               label + "'");
    }
    const int n = static_cast<int>(parse_csv_number(tok.substr(a, b - a + 1), line_no,
                                                    "coalition member"));
    if (n < 0 || n > 15) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": coalition member out of range: " + std::to_string(n));
    }
    mask |= (1u << n);
  }
  if (mask == 0) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": empty coalition");
  }
  return mask;
}

}  // namespace detail

/// Writes the coalition-by-coalition payoff table: one row per coalition in
/// ascending bitmask order, a payoff column per player (blank outside the
/// coalition), and the coalition value last.
inline void write_coalition_csv(std::ostream& out, const CoalitionValueTable& t) {
  out << "coalition";
  for (int n = 0; n < t.n_players; ++n) out << ",payoff_" << n;
  out << ",value\n";
  for (const auto& [mask, entry] : t.entries) {
    out << '"' << coalition_label(mask) << '"';
    for (int n = 0; n < t.n_players; ++n) {
      out << ',';
      if (mask & (1u << n)) out << detail::format_number(entry.payoffs[n]);
    }
    out << ',' << detail::format_number(entry.value) << '\n';
  }
}

inline void save_coalition_table(const std::string& path, const CoalitionValueTable& t) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_coalition_csv(out, t);
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

/// Reads a coalition table back. The header fixes the player count; each
/// row's membership comes from its coalition label, and only member payoff
/// cells are read (blank cells outside the coalition are ignored).
inline CoalitionValueTable read_coalition_csv(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw std::runtime_error("empty coalition table");
  ++line_no;
  const std::vector<std::string> header = detail::split_csv_line(line, line_no);
  if (header.size() < 3 || header.front() != "coalition" || header.back() != "value") {
    throw std::runtime_error("coalition table header must be coalition,payoff_...,value");
  }
  const int n_players = static_cast<int>(header.size()) - 2;
  for (int n = 0; n < n_players; ++n) {
    if (header[1 + n] != "payoff_" + std::to_string(n)) {
      throw std::runtime_error("unexpected header column '" + header[1 + n] + "'");
    }
  }
  if (n_players > 16) throw std::runtime_error("coalition table lists more than 16 players");

  CoalitionValueTable t;
  t.n_players = n_players;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = detail::split_csv_line(line, line_no);
    if (fields.size() != header.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
    }
    const std::uint32_t mask = detail::parse_coalition_label(fields[0], line_no);
    CoalitionEntry entry;
    entry.payoffs.assign(n_players, 0.0);
    for (int n = 0; n < n_players; ++n) {
      const bool member = (mask & (1u << n)) != 0;
      const std::string& cell = fields[1 + n];
      if (member) {
        entry.payoffs[n] = detail::parse_csv_number(cell, line_no, "payoff");
      } else if (!cell.empty()) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": payoff for player " +
                                 std::to_string(n) + " outside coalition " + fields[0]);
      }
    }
    entry.value = detail::parse_csv_number(fields.back(), line_no, "value");
    if (!t.entries.emplace(mask, std::move(entry)).second) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": duplicate coalition " +
                               fields[0]);
    }
  }
  if (t.entries.empty()) throw std::runtime_error("coalition table has no rows");
  return t;
}

inline CoalitionValueTable load_coalition_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return read_coalition_csv(in);
}

/// Writes the per-provider comparison table. The improvement cell is blank
/// when the standalone payoff was not positive (the ratio is undefined).
inline void write_metrics_csv(std::ostream& out, const MetricsReport& report) {
  const int K = report.per_provider.empty()
                    ? 0
                    : static_cast<int>(report.per_provider.front().utilization_pct.size());
  out << "provider,utility_alone,utility_gc,improvement_pct,satisfaction_pct";
  for (int k = 0; k < K; ++k) out << ",utilization_k" << k;
  out << '\n';
  for (const ProviderMetrics& pm : report.per_provider) {
    out << pm.provider << ',' << detail::format_number(pm.utility_alone) << ','
        << detail::format_number(pm.utility_coalition) << ',';
    if (pm.improvement_pct) out << detail::format_number(*pm.improvement_pct);
    out << ',' << detail::format_number(pm.satisfaction_pct);
    for (double u : pm.utilization_pct) out << ',' << detail::format_number(u);
    out << '\n';
  }
}

inline void save_metrics_report(const std::string& path, const MetricsReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_metrics_csv(out, report);
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace coalshare

#endif  // COALSHARE_REPORT_IO_HPP
