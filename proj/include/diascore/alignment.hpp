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

#ifndef DIASCORE_ALIGNMENT_HPP
#define DIASCORE_ALIGNMENT_HPP

/**
 * \file alignment.hpp
 *
 * Word-level minimum-edit alignment with unit costs. The distance is
 * unique; the substitution/deletion/insertion decomposition is not, so the
 * backtrace resolves ties deterministically, preferring
 * correct > substitution > deletion > insertion.
 */

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "diascore/types.hpp"

namespace diascore {

/// Minimum edit distance only, two-row DP. Use word_edit_distance when the
/// S/D/I/C decomposition is needed.
inline std::int64_t edit_distance(std::span<const std::string> ref,
                                  std::span<const std::string> hyp) {
  const std::size_t m = ref.size(), n = hyp.size();
  std::vector<std::int64_t> prev(n + 1), cur(n + 1);
  for (std::size_t j = 0; j <= n; ++j) prev[j] = static_cast<std::int64_t>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = static_cast<std::int64_t>(i);
    for (std::size_t j = 1; j <= n; ++j) {
      const std::int64_t sub = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const std::int64_t del = prev[j] + 1;
      const std::int64_t ins = cur[j - 1] + 1;
      cur[j] = std::min(sub, std::min(del, ins));
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

/// Full alignment with counts. Keeps the whole DP matrix for the backtrace.
inline AlignmentResult word_edit_distance(std::span<const std::string> ref,
                                          std::span<const std::string> hyp) {
  const std::size_t m = ref.size(), n = hyp.size();
  std::vector<std::int32_t> d((m + 1) * (n + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::int32_t& { return d[i * (n + 1) + j]; };

  for (std::size_t i = 0; i <= m; ++i) at(i, 0) = static_cast<std::int32_t>(i);
  for (std::size_t j = 0; j <= n; ++j) at(0, j) = static_cast<std::int32_t>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const std::int32_t sub = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const std::int32_t del = at(i - 1, j) + 1;
      const std::int32_t ins = at(i, j - 1) + 1;
      at(i, j) = std::min(sub, std::min(del, ins));
    }
  }

  AlignmentResult result;
  std::size_t i = m, j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && at(i, j) == at(i - 1, j - 1)) {
      ++result.corrects;
      --i, --j;
    } else if (i > 0 && j > 0 && at(i, j) == at(i - 1, j - 1) + 1) {
      ++result.substitutions;
      --i, --j;
    } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++result.deletions;
      --i;
    } else {
      ++result.insertions;
      --j;
    }
  }
  return result;
}

/// All tokens the transcript attributes to `s`, in segment order; empty if
/// the speaker never speaks.
inline std::vector<std::string> concat_per_speaker(const AttributedTranscript& t,
                                                   const SpeakerLabel& s) {
  std::vector<std::string> out;
  for (const auto& seg : t.segments())
    if (seg.speaker == s) out.insert(out.end(), seg.tokens.begin(), seg.tokens.end());
  return out;
}

}  // namespace diascore

#endif  // DIASCORE_ALIGNMENT_HPP
