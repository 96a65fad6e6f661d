// Copyright 2026 The diascore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIASCORE_REPORT_HPP
#define DIASCORE_REPORT_HPP

/**
 * \file report.hpp
 *
 * Score aggregation and report emission. Per-sample details carry exact
 * integer fractions; aggregation pools numerators and denominators, so the
 * aggregate of a task is the micro-average over its samples and identical
 * inputs always yield byte-identical reports.
 *
 * The seven-column average is emitted only when all seven task columns of
 * the standard layout are present: sr, sv, sl and si on the easy subset,
 * si on the hard subset, and the two vrsdr metrics on the hard subset
 * (an untagged aggregate fills a missing subset where the layout expects
 * exactly one).
 */

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "diascore/manifest.hpp"
#include "diascore/metrics.hpp"
#include "diascore/types.hpp"

namespace diascore {

/// One scored metric of one sample.
struct MetricCell {
  std::string metric;
  Fraction value;
};

struct SampleDetail {
  std::string sample_id;
  Task task = Task::vrsdr;
  Subset subset = Subset::none;
  std::vector<MetricCell> metrics;
  std::optional<IerBreakdown> ier_breakdown;
  std::vector<Warning> warnings;
};

struct RunReport {
  std::vector<ScoreReport> aggregates;
  std::optional<double> avg;  // percentage, only when all seven columns exist
  std::vector<SampleDetail> details;
};

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

/**
 * Renders a fraction as a percentage with one decimal, or two when the
 * value is exactly a two-decimal percentage whose second decimal is
 * non-zero (56.85 stays 56.85; 16.2285... prints as 16.2).
 */
inline std::string format_percent(double fraction_value) {
  const double pct = fraction_value * 100.0;
  const double two = std::round(pct * 100.0) / 100.0;
  char buf[64];
  if (std::abs(pct - two) < 1e-9 && std::llround(two * 100.0) % 10 != 0) {
    std::snprintf(buf, sizeof(buf), "%.2f", two);
  } else {
    std::snprintf(buf, sizeof(buf), "%.1f", std::floor(pct * 10.0 + 0.5) / 10.0);
  }
  return buf;
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

namespace detail {

inline int task_order(Task t) {
  switch (t) {
    case Task::sr: return 0;
    case Task::sv: return 1;
    case Task::sl: return 2;
    case Task::si: return 3;
    case Task::vrsdr: return 4;
  }
  return 5;
}

inline int subset_order(Subset s) {
  switch (s) {
    case Subset::easy: return 0;
    case Subset::hard: return 1;
    default: return 2;
  }
}

inline int metric_order(const std::string& m) {
  if (m == "sa_wer") return 0;
  if (m == "ier") return 1;
  return 2;
}

/// The (task, metric) layout of the seven standard columns with their
/// expected subsets, in report order.
struct AvgColumn {
  Task task;
  Subset subset;
  const char* metric;
};

inline const std::vector<AvgColumn>& avg_columns() {
  static const std::vector<AvgColumn> columns = {
      {Task::sr, Subset::easy, "wer"},          {Task::sv, Subset::easy, "sv_error"},
      {Task::sl, Subset::easy, "sl_miss_rate"}, {Task::si, Subset::easy, "si_error"},
      {Task::si, Subset::hard, "si_error"},     {Task::vrsdr, Subset::hard, "sa_wer"},
      {Task::vrsdr, Subset::hard, "ier"},
  };
  return columns;
}

}  // namespace detail

/// Rebuilds the aggregate rows (and the average, when complete) from
/// per-sample details. This is the single aggregation authority: pooled
/// integer sums per (task, subset, metric), in a fixed row order.
inline RunReport rebuild_from_details(std::vector<SampleDetail> details) {
  struct Key {
    int task_rank;
    int subset_rank;
    int metric_rank;
    std::string task;
    std::string metric;
    Subset subset;
    bool operator<(const Key& o) const {
      return std::tuple(task_rank, subset_rank, metric_rank, metric) <
             std::tuple(o.task_rank, o.subset_rank, o.metric_rank, o.metric);
    }
  };

  std::map<Key, std::pair<Fraction, std::int64_t>> pooled;
  for (const auto& d : details) {
    for (const auto& cell : d.metrics) {
      Key key{detail::task_order(d.task), detail::subset_order(d.subset),
              detail::metric_order(cell.metric), std::string(task_name(d.task)),
              cell.metric, d.subset};
      auto& [fraction, samples] = pooled[key];
      fraction.num += cell.value.num;
      fraction.den += cell.value.den;
      ++samples;
    }
  }

  RunReport report;
  report.details = std::move(details);
  for (const auto& [key, pooled_value] : pooled)
    report.aggregates.push_back(
        {key.task, key.metric, pooled_value.first, key.subset, pooled_value.second});

  // Average over the seven standard columns when all are present.
  auto find_column = [&](const detail::AvgColumn& col) -> const ScoreReport* {
    const ScoreReport* untagged = nullptr;
    bool tagged_elsewhere = false;
    for (const auto& row : report.aggregates) {
      if (row.task != task_name(col.task) || row.metric != col.metric) continue;
      if (row.subset == col.subset) return &row;
      if (row.subset == Subset::none)
        untagged = &row;
      else
        tagged_elsewhere = true;
    }
    // An untagged aggregate may stand in only when no other subset claims
    // this (task, metric) — si needs genuinely distinct easy and hard rows.
    return tagged_elsewhere ? nullptr : untagged;
  };

  std::vector<double> columns;
  for (const auto& col : detail::avg_columns()) {
    const ScoreReport* row = find_column(col);
    if (!row) break;
    columns.push_back(row->value.value() * 100.0);
  }
  if (columns.size() == 7) report.avg = aggregate_avg(columns);
  return report;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

inline std::string render_table(const RunReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-8s %-8s %-14s %10s %10s\n", "task", "subset",
                "metric", "value%", "samples");
  out += line;
  for (const auto& row : report.aggregates) {
    std::snprintf(line, sizeof(line), "%-8s %-8s %-14s %10s %10lld\n", row.task.c_str(),
                  std::string(subset_name(row.subset)).c_str(), row.metric.c_str(),
                  format_percent(row.value.value()).c_str(),
                  static_cast<long long>(row.samples));
    out += line;
  }
  if (report.avg) {
    std::snprintf(line, sizeof(line), "%-8s %-8s %-14s %10s\n", "avg", "", "",
                  format_percent(*report.avg / 100.0).c_str());
    out += line;
  }
  return out;
}

namespace detail {

inline nlohmann::ordered_json fraction_json(const Fraction& f) {
  return {{"numerator", f.num}, {"denominator", f.den}, {"value", f.value()}};
}

inline nlohmann::ordered_json breakdown_json(const IerBreakdown& b) {
  nlohmann::ordered_json speakers = nlohmann::ordered_json::object();
  for (const auto& [name, t] : b.per_speaker)
    speakers[name] = {{"correct_ms", t.correct_ms}, {"miss_ms", t.miss_ms},
                      {"fa_ms", t.fa_ms},           {"conf_ms", t.conf_ms},
                      {"dur_ms", t.dur_ms}};
  return {{"per_speaker", speakers}, {"unregistered_fa_ms", b.unregistered_fa_ms}};
}

inline const char* warning_kind_name(WarningKind k) {
  switch (k) {
    case WarningKind::zero_duration: return "zero_duration";
    case WarningKind::unregistered_speaker: return "unregistered_speaker";
    case WarningKind::out_of_order: return "out_of_order";
    case WarningKind::malformed_line: return "malformed_line";
  }
  return "?";
}

}  // namespace detail

/// Full-precision machine output; identical runs yield identical bytes.
inline std::string render_json(const RunReport& report) {
  nlohmann::ordered_json doc;
  doc["version"] = 1;

  doc["aggregates"] = nlohmann::ordered_json::array();
  for (const auto& row : report.aggregates) {
    nlohmann::ordered_json item;
    item["task"] = row.task;
    item["subset"] = std::string(subset_name(row.subset));
    item["metric"] = row.metric;
    item["numerator"] = row.value.num;
    item["denominator"] = row.value.den;
    item["value"] = row.value.value();
    item["samples"] = row.samples;
    doc["aggregates"].push_back(std::move(item));
  }
  if (report.avg) doc["avg"] = *report.avg;

  doc["details"] = nlohmann::ordered_json::array();
  for (const auto& d : report.details) {
    nlohmann::ordered_json item;
    item["sample_id"] = d.sample_id;
    item["task"] = std::string(task_name(d.task));
    item["subset"] = std::string(subset_name(d.subset));
    item["metrics"] = nlohmann::ordered_json::array();
    for (const auto& cell : d.metrics) {
      nlohmann::ordered_json m = detail::fraction_json(cell.value);
      m["metric"] = cell.metric;
      item["metrics"].push_back(std::move(m));
    }
    if (d.ier_breakdown) item["ier_breakdown"] = detail::breakdown_json(*d.ier_breakdown);
    if (!d.warnings.empty()) {
      item["warnings"] = nlohmann::ordered_json::array();
      for (const auto& w : d.warnings)
        item["warnings"].push_back({{"kind", detail::warning_kind_name(w.kind)},
                                    {"line", w.line},
                                    {"message", w.message}});
    }
    doc["details"].push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

/// One row per (task, subset); metric values are percentages. The
/// seven-column average is a summary, not a task row, so it appears only
/// in the table and json formats.
inline std::string render_csv(const RunReport& report) {
  std::string out =
      "task,subset,samples,wer,sv_error,sl_miss_rate,si_error,sa_wer,ier\n";
  static const std::vector<std::string> metric_columns = {
      "wer", "sv_error", "sl_miss_rate", "si_error", "sa_wer", "ier"};

  std::vector<std::pair<std::string, Subset>> groups;
  for (const auto& row : report.aggregates) {
    const auto group = std::pair(row.task, row.subset);
    if (std::find(groups.begin(), groups.end(), group) == groups.end())
      groups.push_back(group);
  }
  for (const auto& [task, subset] : groups) {
    std::int64_t samples = 0;
    std::map<std::string, std::string> cells;
    for (const auto& row : report.aggregates)
      if (row.task == task && row.subset == subset) {
        cells[row.metric] = format_percent(row.value.value());
        samples = std::max(samples, row.samples);
      }
    out += task + "," + std::string(subset_name(subset)) + "," + std::to_string(samples);
    for (const auto& metric : metric_columns)
      out += "," + (cells.count(metric) ? cells[metric] : std::string());
    out += "\n";
  }
  return out;
}

/// Reads a JSON report back into memory (aggregates, average, details).
inline RunReport parse_report_json(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(std::string("report is not valid JSON: ") + e.what());
  }

  RunReport report;
  for (const auto& item : doc.at("aggregates")) {
    ScoreReport row;
    row.task = item.at("task").get<std::string>();
    row.metric = item.at("metric").get<std::string>();
    const auto subset = item.at("subset").get<std::string>();
    row.subset = subset == "easy" ? Subset::easy : subset == "hard" ? Subset::hard : Subset::none;
    row.value = {item.at("numerator").get<std::int64_t>(),
                 item.at("denominator").get<std::int64_t>()};
    row.samples = item.at("samples").get<std::int64_t>();
    report.aggregates.push_back(std::move(row));
  }
  if (doc.contains("avg")) report.avg = doc["avg"].get<double>();

  for (const auto& item : doc.at("details")) {
    SampleDetail d;
    d.sample_id = item.at("sample_id").get<std::string>();
    d.task = task_from_name(item.at("task").get<std::string>()).value_or(Task::vrsdr);
    const auto subset = item.at("subset").get<std::string>();
    d.subset = subset == "easy" ? Subset::easy : subset == "hard" ? Subset::hard : Subset::none;
    for (const auto& m : item.at("metrics"))
      d.metrics.push_back({m.at("metric").get<std::string>(),
                           {m.at("numerator").get<std::int64_t>(),
                            m.at("denominator").get<std::int64_t>()}});
    report.details.push_back(std::move(d));
  }
  return report;
}

}  // namespace diascore

#endif  // DIASCORE_REPORT_HPP
