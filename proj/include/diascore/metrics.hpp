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

#ifndef DIASCORE_METRICS_HPP
#define DIASCORE_METRICS_HPP

/**
 * \file metrics.hpp
 *
 * All scored quantities. The identity-fixed pair (sa_wer, ier) holds the
 * speaker mapping to the registered labels; the relaxed pair (cp_wer, der)
 * searches over label mappings via minimum-cost assignment. The atomic-task
 * metrics (wer, sv_error, si_error, sl_miss_rate) and the seven-column
 * average complete the set.
 *
 * Every rate is returned as an exact integer Fraction. WER-family values
 * and ier may exceed 1 (insertions, false alarms); the classification
 * errors and iou lie in [0, 1].
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diascore/alignment.hpp"
#include "diascore/assignment.hpp"
#include "diascore/timeline.hpp"
#include "diascore/types.hpp"

namespace diascore {

// ---------------------------------------------------------------------------
// Identity-fixed metrics
// ---------------------------------------------------------------------------

struct SaWerResult {
  Fraction fraction;        // error words / reference words
  AlignmentResult totals;   // summed over registered speakers
};

/**
 * Speaker-attributed WER under the fixed registered-identity mapping:
 * per-speaker edit distances summed over the registration, divided by the
 * total reference word count. Hypothesis words attributed to unregistered
 * speakers appear in no per-speaker hypothesis (they surface as deletions
 * against the true speaker).
 */
inline SaWerResult sa_wer_detailed(const AttributedTranscript& ref,
                                   const AttributedTranscript& hyp,
                                   const Registration& r) {
  for (const auto& s : ref.speakers())
    if (!r.contains(s)) throw UnknownReferenceSpeakerError(s.name());

  SaWerResult out;
  std::int64_t ref_words = 0;
  for (const auto& entry : r.entries()) {
    const auto ref_tokens = concat_per_speaker(ref, entry.label);
    const auto hyp_tokens = concat_per_speaker(hyp, entry.label);
    ref_words += static_cast<std::int64_t>(ref_tokens.size());
    out.totals += word_edit_distance(ref_tokens, hyp_tokens);
  }
  if (ref_words == 0) throw EmptyReferenceError("reference contains no words");
  out.fraction = {out.totals.distance(), ref_words};
  return out;
}

inline Fraction sa_wer(const AttributedTranscript& ref, const AttributedTranscript& hyp,
                       const Registration& r) {
  return sa_wer_detailed(ref, hyp, r).fraction;
}

struct IerResult {
  Fraction fraction;  // error ms / reference speech ms
  IerBreakdown breakdown;
};

/// Identification error rate under the fixed registered-identity mapping:
/// missed speech, false alarms, and confusion time over total reference
/// speech time, from the timeline decomposition.
inline IerResult ier_detailed(const AttributedTranscript& ref,
                              const AttributedTranscript& hyp, const Registration& r,
                              Ms collar_ms = 0) {
  IerResult out;
  out.breakdown = attribute(build_timeline(ref, hyp, collar_ms), r);
  const Ms dur = out.breakdown.total_dur_ms();
  if (dur == 0) throw EmptyReferenceError("reference contains no scored speech");
  out.fraction = {out.breakdown.error_ms(), dur};
  return out;
}

inline Fraction ier(const AttributedTranscript& ref, const AttributedTranscript& hyp,
                    const Registration& r, Ms collar_ms = 0) {
  return ier_detailed(ref, hyp, r, collar_ms).fraction;
}

// ---------------------------------------------------------------------------
// Permutation-optimal baselines
// ---------------------------------------------------------------------------

/**
 * Concatenated minimum-permutation WER: the same objective as sa_wer but
 * minimized over injective hypothesis-to-reference speaker mappings.
 * Unequal speaker counts are padded with empty pseudo-speakers, so an
 * unmatched hypothesis speaker costs its full word count as insertions and
 * an unmatched reference speaker its full word count as deletions.
 */
inline Fraction cp_wer(const AttributedTranscript& ref, const AttributedTranscript& hyp) {
  const auto ref_speakers = ref.speakers();
  const auto hyp_speakers = hyp.speakers();

  std::vector<std::vector<std::string>> ref_tokens, hyp_tokens;
  std::int64_t ref_words = 0;
  for (const auto& s : ref_speakers) {
    ref_tokens.push_back(concat_per_speaker(ref, s));
    ref_words += static_cast<std::int64_t>(ref_tokens.back().size());
  }
  if (ref_words == 0) throw EmptyReferenceError("reference contains no words");
  for (const auto& s : hyp_speakers) hyp_tokens.push_back(concat_per_speaker(hyp, s));

  const std::size_t n = std::max(ref_speakers.size(), hyp_speakers.size());
  CostMatrix costs(n, n, 0);
  for (std::size_t h = 0; h < n; ++h) {
    for (std::size_t rr = 0; rr < n; ++rr) {
      std::int64_t c = 0;
      if (h < hyp_tokens.size() && rr < ref_tokens.size())
        c = edit_distance(ref_tokens[rr], hyp_tokens[h]);
      else if (h < hyp_tokens.size())
        c = static_cast<std::int64_t>(hyp_tokens[h].size());  // unmatched hyp: insertions
      else if (rr < ref_tokens.size())
        c = static_cast<std::int64_t>(ref_tokens[rr].size());  // unmatched ref: deletions
      costs.set(h, rr, c);
    }
  }
  return {solve_assignment(costs).total_cost, ref_words};
}

/**
 * Diarization error rate: ier after relabeling hypothesis speakers by the
 * overlap-duration-maximizing assignment (maximization via cost negation).
 * Only pairs with positive overlap are matched; unmatched hypothesis
 * speakers keep a label outside the reference set and fall under the
 * unregistered false-alarm convention, identical to ier's.
 */
inline Fraction der(const AttributedTranscript& ref, const AttributedTranscript& hyp,
                    Ms collar_ms = 0) {
  const auto ref_act = merged_activity(ref);
  const auto hyp_act = merged_activity(hyp);

  // First-appearance order keeps the matrix (and any tie-break) invariant
  // under speaker renaming.
  std::vector<std::string> ref_names, hyp_names;
  for (const auto& s : ref.speakers())
    if (ref_act.count(s.name())) ref_names.push_back(s.name());
  for (const auto& s : hyp.speakers())
    if (hyp_act.count(s.name())) hyp_names.push_back(s.name());
  if (ref_names.empty()) throw EmptyReferenceError("reference contains no speech");

  // Overlap matrix, then max -> min via (max_entry - overlap).
  std::int64_t max_overlap = 0;
  std::vector<std::vector<Ms>> overlap(hyp_names.size(), std::vector<Ms>(ref_names.size(), 0));
  for (std::size_t h = 0; h < hyp_names.size(); ++h)
    for (std::size_t rr = 0; rr < ref_names.size(); ++rr) {
      overlap[h][rr] = overlap_ms(hyp_act.at(hyp_names[h]), ref_act.at(ref_names[rr]));
      max_overlap = std::max(max_overlap, overlap[h][rr]);
    }

  std::map<std::string, std::string> relabel;
  if (!hyp_names.empty()) {
    CostMatrix costs(hyp_names.size(), ref_names.size(), 0);
    for (std::size_t h = 0; h < hyp_names.size(); ++h)
      for (std::size_t rr = 0; rr < ref_names.size(); ++rr)
        costs.set(h, rr, max_overlap - overlap[h][rr]);

    const auto solution = solve_assignment(costs.padded_to_square(max_overlap));
    for (std::size_t h = 0; h < hyp_names.size(); ++h) {
      const std::size_t rr = solution.col_of_row[h];
      if (rr < ref_names.size() && overlap[h][rr] > 0) relabel[hyp_names[h]] = ref_names[rr];
    }
  }

  // Unmatched hypothesis speakers must not collide with reference labels.
  auto is_ref_name = [&](const std::string& name) {
    return std::find(ref_names.begin(), ref_names.end(), name) != ref_names.end();
  };
  std::vector<Segment> relabeled;
  relabeled.reserve(hyp.segments().size());
  for (const auto& seg : hyp.segments()) {
    std::string name;
    if (auto it = relabel.find(seg.speaker.name()); it != relabel.end()) {
      name = it->second;
    } else {
      name = seg.speaker.name();
      while (is_ref_name(name)) name += "#";
    }
    relabeled.push_back({SpeakerLabel(name), seg.start_ms, seg.end_ms, seg.tokens});
  }

  std::vector<Registration::Entry> entries;
  for (const auto& name : ref_names) entries.push_back({SpeakerLabel(name), ""});
  return ier(ref, AttributedTranscript(std::move(relabeled)), Registration(std::move(entries)),
             collar_ms);
}

// ---------------------------------------------------------------------------
// Atomic-task metrics
// ---------------------------------------------------------------------------

/// Plain word error rate; may exceed 1 through insertions.
inline Fraction wer(std::span<const std::string> ref_tokens,
                    std::span<const std::string> hyp_tokens) {
  if (ref_tokens.empty()) throw EmptyReferenceError("reference contains no words");
  return {word_edit_distance(ref_tokens, hyp_tokens).distance(),
          static_cast<std::int64_t>(ref_tokens.size())};
}

struct SvTrial {
  Polarity label;   // gold, yes or no
  Polarity answer;  // extracted from the response; unparseable counts wrong
};

inline Fraction sv_error(std::span<const SvTrial> trials) {
  if (trials.empty()) throw EmptyInputError("no verification trials");
  std::int64_t wrong = 0;
  for (const auto& t : trials)
    if (t.answer == Polarity::unparseable || t.answer != t.label) ++wrong;
  return {wrong, static_cast<std::int64_t>(trials.size())};
}

struct SiTrial {
  std::string gold;                  // option letter
  std::optional<std::string> answer;  // nullopt = unparseable, counts wrong
};

inline Fraction si_error(std::span<const SiTrial> trials) {
  if (trials.empty()) throw EmptyInputError("no identification trials");
  std::int64_t wrong = 0;
  for (const auto& t : trials)
    if (!t.answer.has_value() || *t.answer != t.gold) ++wrong;
  return {wrong, static_cast<std::int64_t>(trials.size())};
}

/// Intersection over union; 0 when disjoint. Both boxes must use the same
/// coordinate unit.
inline double iou(const BoundingBox& a, const BoundingBox& b) {
  if (a.unit != b.unit) throw UnitMismatchError();
  if (!a.valid() || !b.valid()) throw Error("iou requires valid boxes (x2 > x1, y2 > y1)");
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

enum class SlMode { iou, center };

/**
 * Localization miss rate. A prediction misses when it is unparseable, uses
 * a different coordinate unit than its ground truth, or fails the hit
 * criterion: iou >= threshold, or in center mode the prediction's center
 * lying inside the ground-truth box.
 */
inline Fraction sl_miss_rate(std::span<const std::optional<BoundingBox>> preds,
                             std::span<const BoundingBox> gts, double threshold = 0.5,
                             SlMode mode = SlMode::iou) {
  if (gts.empty()) throw EmptyInputError("no localization trials");
  if (preds.size() != gts.size())
    throw Error("prediction and ground-truth counts differ: " +
                std::to_string(preds.size()) + " vs " + std::to_string(gts.size()));

  std::int64_t misses = 0;
  for (std::size_t i = 0; i < gts.size(); ++i) {
    const auto& pred = preds[i];
    bool hit = false;
    if (pred.has_value() && pred->valid() && pred->unit == gts[i].unit) {
      if (mode == SlMode::iou) {
        hit = iou(*pred, gts[i]) >= threshold;
      } else {
        const double cx = (pred->x1 + pred->x2) / 2;
        const double cy = (pred->y1 + pred->y2) / 2;
        hit = cx >= gts[i].x1 && cx <= gts[i].x2 && cy >= gts[i].y1 && cy <= gts[i].y2;
      }
    }
    if (!hit) ++misses;
  }
  return {misses, static_cast<std::int64_t>(gts.size())};
}

// ---------------------------------------------------------------------------
// Aggregate
// ---------------------------------------------------------------------------

/// Arithmetic mean of the seven per-task percentage columns, in their
/// report order.
inline double aggregate_avg(std::span<const double> per_task_percentages) {
  if (per_task_percentages.size() != 7)
    throw WrongArityError("aggregate average needs exactly 7 task columns, got " +
                          std::to_string(per_task_percentages.size()));
  double sum = 0;
  for (double v : per_task_percentages) sum += v;
  return sum / 7.0;
}

}  // namespace diascore

#endif  // DIASCORE_METRICS_HPP
