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

#ifndef DIASCORE_RUNNER_HPP
#define DIASCORE_RUNNER_HPP

/**
 * \file runner.hpp
 *
 * Manifest-driven batch scoring. Samples are scored by a bounded worker
 * pool; each worker writes into its sample's slot and results are merged
 * in manifest order, so the report is identical no matter how work is
 * scheduled. References always parse strictly (they are curated);
 * hypotheses parse leniently unless strict mode is requested.
 *
 * Exit codes: 0 success, 1 any strict-mode parse failure, 2 manifest or
 * schema errors (including missing files — checked up front so no partial
 * report is ever written).
 */

#include <atomic>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "diascore/manifest.hpp"
#include "diascore/metrics.hpp"
#include "diascore/record_io.hpp"
#include "diascore/report.hpp"
#include "diascore/types.hpp"

namespace diascore {

struct RunOptions {
  Ms collar_ms = 0;
  double iou_threshold = 0.5;
  SlMode sl_mode = SlMode::iou;
  bool strict = false;  // strict hypothesis parsing
  NormalizationConfig norm;
  int jobs = 1;
};

struct RunOutcome {
  RunReport report;
  int exit_code = 0;
  std::vector<std::string> errors;
};

namespace detail {

/// Pairs gold lines with response lines by index. Gold lines must be
/// non-blank; missing responses become empty strings (unparseable) with a
/// warning in lenient mode, or an error in strict mode.
struct PairedLines {
  std::vector<std::string> gold;
  std::vector<std::string> response;
  std::vector<Warning> warnings;
};

inline PairedLines pair_lines(const std::string& gold_text, const std::string& hyp_text,
                              bool strict) {
  PairedLines out;
  for (const auto& line : split_lines(gold_text)) {
    const auto trimmed = trim(line);
    if (!trimmed.empty()) out.gold.emplace_back(trimmed);
  }
  std::vector<std::string> hyp_lines;
  for (const auto& line : split_lines(hyp_text)) hyp_lines.emplace_back(line);
  while (!hyp_lines.empty() && trim(hyp_lines.back()).empty()) hyp_lines.pop_back();

  if (strict && hyp_lines.size() != out.gold.size())
    throw ParseError(static_cast<int>(std::min(hyp_lines.size(), out.gold.size())) + 1,
                     "response count " + std::to_string(hyp_lines.size()) +
                         " does not match trial count " + std::to_string(out.gold.size()));
  if (hyp_lines.size() < out.gold.size())
    out.warnings.push_back({WarningKind::malformed_line, -1,
                            std::to_string(out.gold.size() - hyp_lines.size()) +
                                " missing response line(s), counted unparseable"});
  else if (hyp_lines.size() > out.gold.size())
    out.warnings.push_back({WarningKind::malformed_line, -1,
                            std::to_string(hyp_lines.size() - out.gold.size()) +
                                " extra response line(s) ignored"});

  hyp_lines.resize(out.gold.size());
  out.response = std::move(hyp_lines);
  return out;
}

}  // namespace detail

/// Scores one (reference, hypothesis) pair for the given task. Throws
/// ParseError / Error subtypes on strict failures.
inline SampleDetail score_sample(const ManifestEntry& entry, const RunOptions& opts) {
  SampleDetail detail;
  detail.sample_id = entry.sample_id;
  detail.task = entry.task;
  detail.subset = entry.subset;

  const std::string ref_text = read_text_file(entry.reference_path);
  const std::string hyp_text = read_text_file(entry.hypothesis_path);
  const ParseMode hyp_mode = opts.strict ? ParseMode::strict : ParseMode::lenient;

  switch (entry.task) {
    case Task::vrsdr: {
      const Registration registration =
          parse_registration(read_text_file(*entry.registration_path));
      const auto ref = parse_transcript(ref_text, ParseMode::strict, opts.norm);
      auto hyp = parse_transcript(hyp_text, hyp_mode, opts.norm);
      detail.warnings = std::move(hyp.warnings);

      const auto sa = sa_wer_detailed(ref.transcript, hyp.transcript, registration);
      const auto id = ier_detailed(ref.transcript, hyp.transcript, registration, opts.collar_ms);
      detail.metrics.push_back({"sa_wer", sa.fraction});
      detail.metrics.push_back({"ier", id.fraction});
      detail.ier_breakdown = id.breakdown;
      break;
    }
    case Task::sr: {
      const auto ref_tokens = normalize(ref_text, opts.norm);
      const auto hyp_tokens = normalize(hyp_text, opts.norm);
      detail.metrics.push_back({"wer", wer(ref_tokens, hyp_tokens)});
      break;
    }
    case Task::sv: {
      auto paired = detail::pair_lines(ref_text, hyp_text, opts.strict);
      detail.warnings = std::move(paired.warnings);
      std::vector<SvTrial> trials;
      for (std::size_t i = 0; i < paired.gold.size(); ++i) {
        const std::string gold = detail::ascii_lower(detail::trim(paired.gold[i]));
        if (gold != "yes" && gold != "no")
          throw ParseError(static_cast<int>(i) + 1,
                           "gold label must be yes or no, got '" + paired.gold[i] + "'");
        trials.push_back({gold == "yes" ? Polarity::yes : Polarity::no,
                          extract_binary_answer(paired.response[i])});
      }
      detail.metrics.push_back({"sv_error", sv_error(trials)});
      break;
    }
    case Task::si: {
      auto paired = detail::pair_lines(ref_text, hyp_text, opts.strict);
      detail.warnings = std::move(paired.warnings);
      std::vector<SiTrial> trials;
      for (std::size_t i = 0; i < paired.gold.size(); ++i) {
        // Gold line: option letter, optionally followed by tab-separated
        // option texts assigned to letters A, B, C, ...
        std::vector<std::string> fields;
        std::size_t pos = 0;
        const std::string& line = paired.gold[i];
        while (true) {
          const std::size_t tab = line.find('\t', pos);
          fields.emplace_back(detail::trim(
              tab == std::string::npos ? line.substr(pos) : line.substr(pos, tab - pos)));
          if (tab == std::string::npos) break;
          pos = tab + 1;
        }
        const std::string gold_letter = fields[0];
        std::vector<ChoiceOption> options;
        if (fields.size() > 1) {
          for (std::size_t k = 1; k < fields.size(); ++k)
            options.push_back({std::string(1, static_cast<char>('A' + k - 1)), fields[k]});
        } else {
          for (char c = 'A'; c <= 'D'; ++c) options.push_back({std::string(1, c), ""});
        }
        bool known = false;
        for (const auto& opt : options) known = known || opt.letter == gold_letter;
        if (!known)
          throw ParseError(static_cast<int>(i) + 1,
                           "gold option '" + gold_letter + "' is not among the options");
        trials.push_back({gold_letter, extract_choice(paired.response[i], options)});
      }
      detail.metrics.push_back({"si_error", si_error(trials)});
      break;
    }
    case Task::sl: {
      auto paired = detail::pair_lines(ref_text, hyp_text, opts.strict);
      detail.warnings = std::move(paired.warnings);
      std::vector<BoundingBox> gts;
      std::vector<std::optional<BoundingBox>> preds;
      for (std::size_t i = 0; i < paired.gold.size(); ++i) {
        try {
          gts.push_back(parse_bbox(paired.gold[i]));
        } catch (const ParseError& e) {
          throw ParseError(static_cast<int>(i) + 1,
                           "ground-truth box: " + std::string(e.reason()));
        }
        preds.push_back(try_parse_bbox(paired.response[i]));
      }
      detail.metrics.push_back(
          {"sl_miss_rate", sl_miss_rate(preds, gts, opts.iou_threshold, opts.sl_mode)});
      break;
    }
  }
  return detail;
}

/**
 * Scores every manifest entry and aggregates. All referenced files are
 * checked before any scoring starts. With jobs > 1 samples are scored by a
 * worker pool; aggregation order is manifest order regardless.
 */
inline RunOutcome run_manifest(const std::filesystem::path& manifest_path,
                               const RunOptions& opts) {
  RunOutcome outcome;

  Manifest manifest;
  try {
    manifest = load_manifest(manifest_path);
  } catch (const Error& e) {
    outcome.exit_code = 2;
    outcome.errors.push_back(e.what());
    return outcome;
  }

  for (const auto& entry : manifest.entries) {
    std::vector<std::filesystem::path> paths = {entry.reference_path, entry.hypothesis_path};
    if (entry.registration_path) paths.push_back(*entry.registration_path);
    for (const auto& path : paths)
      if (!std::filesystem::exists(path)) {
        outcome.exit_code = 2;
        outcome.errors.push_back("missing file: " + path.string() + " (sample " +
                                 entry.sample_id + ")");
      }
  }
  if (outcome.exit_code != 0) return outcome;

  const std::size_t n = manifest.entries.size();
  std::vector<std::optional<SampleDetail>> slots(n);
  std::vector<std::string> failures(n);
  std::atomic<std::size_t> cursor{0};

  auto worker = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= n) return;
      try {
        slots[i] = score_sample(manifest.entries[i], opts);
      } catch (const Error& e) {
        failures[i] = std::string(e.what()) + " (sample " + manifest.entries[i].sample_id + ")";
      }
    }
  };

  const int jobs = std::max(1, opts.jobs);
  if (jobs == 1 || n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int pool_size = static_cast<int>(std::min<std::size_t>(jobs, n));
    pool.reserve(pool_size);
    for (int i = 0; i < pool_size; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<SampleDetail> details;
  details.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!failures[i].empty()) {
      outcome.exit_code = 1;
      outcome.errors.push_back(failures[i]);
    } else if (slots[i]) {
      details.push_back(std::move(*slots[i]));
    }
  }
  if (outcome.exit_code != 0) return outcome;  // no partial report

  outcome.report = rebuild_from_details(std::move(details));
  return outcome;
}

}  // namespace diascore

#endif  // DIASCORE_RUNNER_HPP
