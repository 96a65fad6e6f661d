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

#ifndef DIASCORE_TIMELINE_HPP
#define DIASCORE_TIMELINE_HPP

/**
 * \file timeline.hpp
 *
 * Exact interval algebra over reference and hypothesis speaker activity.
 * A boundary sweep cuts [0, T] into cells on which both active sets are
 * constant; attribution then classifies each cell's duration into
 * correct/miss/confusion/false-alarm time per registered speaker.
 */

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "diascore/types.hpp"

namespace diascore {

struct TimelineCell {
  Ms start_ms = 0;
  Ms end_ms = 0;
  std::vector<std::string> ref_active;  // sorted distinct speaker names
  std::vector<std::string> hyp_active;
  bool excluded = false;  // inside a collar around a reference boundary

  Ms duration_ms() const { return end_ms - start_ms; }
};

/// Cells partition [0, T] without gaps or overlaps; T is the maximum
/// segment end over both transcripts.
struct Timeline {
  std::vector<TimelineCell> cells;
  Ms total_ms = 0;
};

using Interval = std::pair<Ms, Ms>;

/// Per-speaker activity with same-speaker overlapping or touching intervals
/// merged; zero-duration segments carry no time and are dropped.
inline std::map<std::string, std::vector<Interval>> merged_activity(
    const AttributedTranscript& t) {
  std::map<std::string, std::vector<Interval>> act;
  for (const auto& seg : t.segments())
    if (seg.end_ms > seg.start_ms)
      act[seg.speaker.name()].push_back({seg.start_ms, seg.end_ms});
  for (auto& [_, ivs] : act) {
    std::sort(ivs.begin(), ivs.end());
    std::vector<Interval> merged;
    for (const auto& iv : ivs) {
      if (!merged.empty() && iv.first <= merged.back().second)
        merged.back().second = std::max(merged.back().second, iv.second);
      else
        merged.push_back(iv);
    }
    ivs = std::move(merged);
  }
  return act;
}

/// Total intersection time of two merged, sorted interval lists.
inline Ms overlap_ms(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  Ms total = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const Ms lo = std::max(a[i].first, b[j].first);
    const Ms hi = std::min(a[i].second, b[j].second);
    if (hi > lo) total += hi - lo;
    if (a[i].second < b[j].second)
      ++i;
    else
      ++j;
  }
  return total;
}

/**
 * Cuts [0, T] at every distinct segment endpoint of either transcript
 * (after same-speaker merging) and records the constant active sets per
 * cell. With collar_ms > 0, cells lying entirely within +-collar_ms of any
 * reference boundary are marked excluded and skipped by attribution.
 */
inline Timeline build_timeline(const AttributedTranscript& ref,
                               const AttributedTranscript& hyp, Ms collar_ms = 0) {
  if (collar_ms < 0) throw Error("collar must be non-negative");

  Timeline tl;
  tl.total_ms = std::max(ref.max_end_ms(), hyp.max_end_ms());
  if (tl.total_ms == 0) return tl;

  const auto ref_act = merged_activity(ref);
  const auto hyp_act = merged_activity(hyp);

  std::set<Ms> point_set{0, tl.total_ms};
  for (const auto& [_, ivs] : ref_act)
    for (const auto& iv : ivs) {
      point_set.insert(iv.first);
      point_set.insert(iv.second);
    }
  for (const auto& [_, ivs] : hyp_act)
    for (const auto& iv : ivs) {
      point_set.insert(iv.first);
      point_set.insert(iv.second);
    }
  const std::vector<Ms> points(point_set.begin(), point_set.end());

  tl.cells.reserve(points.size() - 1);
  for (std::size_t k = 0; k + 1 < points.size(); ++k)
    tl.cells.push_back({points[k], points[k + 1], {}, {}, false});

  auto cell_index = [&](Ms p) {
    return static_cast<std::size_t>(
        std::lower_bound(points.begin(), points.end(), p) - points.begin());
  };
  auto mark = [&](const std::map<std::string, std::vector<Interval>>& act,
                  bool into_ref) {
    for (const auto& [name, ivs] : act)
      for (const auto& iv : ivs)
        for (std::size_t k = cell_index(iv.first); k < cell_index(iv.second); ++k)
          (into_ref ? tl.cells[k].ref_active : tl.cells[k].hyp_active).push_back(name);
  };
  mark(ref_act, true);
  mark(hyp_act, false);
  for (auto& cell : tl.cells) {
    std::sort(cell.ref_active.begin(), cell.ref_active.end());
    std::sort(cell.hyp_active.begin(), cell.hyp_active.end());
  }

  if (collar_ms > 0) {
    std::set<Ms> boundary_set;
    for (const auto& [_, ivs] : ref_act)
      for (const auto& iv : ivs) {
        boundary_set.insert(iv.first);
        boundary_set.insert(iv.second);
      }
    // A cell is excluded iff some single boundary p satisfies
    // [start, end] within [p - collar, p + collar].
    const std::vector<Ms> boundaries(boundary_set.begin(), boundary_set.end());
    for (auto& cell : tl.cells) {
      auto it = std::lower_bound(boundaries.begin(), boundaries.end(),
                                 cell.end_ms - collar_ms);
      if (it != boundaries.end() && *it <= cell.start_ms + collar_ms)
        cell.excluded = true;
    }
  }
  return tl;
}

/**
 * The Miss/FA/Conf/Dur decomposition over the registered speaker set. Per
 * non-excluded cell of duration d and registered speaker s:
 *   - s active in both            -> correct += d
 *   - s in ref, hyp silent        -> miss += d
 *   - s in ref, hyp active w/o s  -> conf += d
 *   - s in hyp, ref silent        -> fa += d
 * Unregistered hypothesis speakers during reference silence add d to
 * unregistered_fa_ms once per cell. dur is each speaker's reference active
 * time over the attributed cells.
 */
inline IerBreakdown attribute(const Timeline& tl, const Registration& r) {
  IerBreakdown out;
  for (const auto& entry : r.entries()) out.per_speaker[entry.label.name()] = {};

  for (const auto& cell : tl.cells) {
    if (cell.excluded) continue;
    const Ms d = cell.duration_ms();

    for (const auto& name : cell.ref_active) {
      auto it = out.per_speaker.find(name);
      if (it == out.per_speaker.end()) throw UnknownReferenceSpeakerError(name);
      SpeakerTime& st = it->second;
      st.dur_ms += d;
      const bool in_hyp = std::binary_search(cell.hyp_active.begin(),
                                             cell.hyp_active.end(), name);
      if (in_hyp)
        st.correct_ms += d;
      else if (cell.hyp_active.empty())
        st.miss_ms += d;
      else
        st.conf_ms += d;
    }

    if (cell.ref_active.empty()) {
      bool unregistered_seen = false;
      for (const auto& name : cell.hyp_active) {
        auto it = out.per_speaker.find(name);
        if (it != out.per_speaker.end())
          it->second.fa_ms += d;
        else
          unregistered_seen = true;
      }
      if (unregistered_seen) out.unregistered_fa_ms += d;
    }
  }
  return out;
}

}  // namespace diascore

#endif  // DIASCORE_TIMELINE_HPP
