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

#ifndef DIASCORE_SYNTH_HPP
#define DIASCORE_SYNTH_HPP

/**
 * \file synth.hpp
 *
 * Deterministic synthetic conversations and controlled perturbations, used
 * to build fixtures whose metric deltas are known analytically. Randomness
 * comes from SplitMix64 with the published constants, not a platform
 * generator, so fixtures reproduce bit-exactly everywhere.
 */

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "diascore/types.hpp"

namespace diascore {

/// SplitMix64 (Steele et al.). One 64-bit draw per decision.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n); n must be positive. Modulo bias is acceptable for
  /// fixture generation and keeps the draw sequence trivial to replicate.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t in_range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  /// Uniform double in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

struct SynthConfig {
  std::uint64_t seed = 1;
  int n_speakers = 2;
  int n_turns = 10;
  std::pair<int, int> words_per_turn{3, 8};
  std::pair<Ms, Ms> turn_duration_ms{800, 3000};
  std::pair<Ms, Ms> gap_ms{0, 500};
  double overlap_probability = 0.0;
  int vocabulary = 50;

  void check() const {
    if (n_speakers < 1) throw Error("n_speakers must be >= 1");
    if (n_turns < 1) throw Error("n_turns must be >= 1");
    if (words_per_turn.first < 0 || words_per_turn.second < words_per_turn.first)
      throw Error("words_per_turn range is empty");
    if (turn_duration_ms.first < 1 || turn_duration_ms.second < turn_duration_ms.first)
      throw Error("turn_duration_ms range is empty");
    if (gap_ms.first < 0 || gap_ms.second < gap_ms.first)
      throw Error("gap_ms range is empty");
    if (overlap_probability < 0.0 || overlap_probability > 1.0)
      throw Error("overlap_probability must be in [0, 1]");
    if (vocabulary < 1) throw Error("vocabulary must be >= 1");
  }
};

/**
 * Generates one conversation. Speakers are named S1..Sn. Per turn, in
 * draw order: speaker, word count, each word ("w<k>"), duration, then
 * either an overlap draw (start inside the previous turn) with probability
 * overlap_probability, or a gap draw (start after the previous turn). With
 * overlap_probability 0 turns never overlap.
 */
inline std::pair<AttributedTranscript, Registration> gen_conversation(const SynthConfig& cfg) {
  cfg.check();
  SplitMix64 rng(cfg.seed);

  std::vector<Registration::Entry> entries;
  for (int i = 1; i <= cfg.n_speakers; ++i)
    entries.push_back({SpeakerLabel("S" + std::to_string(i)),
                       "synthetic speaker " + std::to_string(i)});
  Registration registration(std::move(entries));

  std::vector<Segment> segments;
  Ms prev_start = 0, prev_end = 0;
  for (int turn = 0; turn < cfg.n_turns; ++turn) {
    const auto& speaker =
        registration.entries()[static_cast<std::size_t>(rng.below(cfg.n_speakers))].label;
    const int n_words =
        static_cast<int>(rng.in_range(cfg.words_per_turn.first, cfg.words_per_turn.second));
    std::vector<std::string> tokens;
    tokens.reserve(static_cast<std::size_t>(n_words));
    for (int w = 0; w < n_words; ++w)
      tokens.push_back("w" + std::to_string(rng.below(cfg.vocabulary)));
    const Ms duration = rng.in_range(cfg.turn_duration_ms.first, cfg.turn_duration_ms.second);

    Ms start;
    if (turn > 0 && cfg.overlap_probability > 0.0 && rng.unit() < cfg.overlap_probability) {
      // Overlap the previous turn by at least 1 ms.
      start = prev_end - rng.in_range(1, prev_end - prev_start);
    } else {
      start = prev_end + rng.in_range(cfg.gap_ms.first, cfg.gap_ms.second);
    }
    segments.push_back({speaker, start, start + duration, std::move(tokens)});
    prev_start = start;
    prev_end = start + duration;
  }
  return {AttributedTranscript(std::move(segments), registration), registration};
}

// ---------------------------------------------------------------------------
// Perturbations
// ---------------------------------------------------------------------------

struct SwapLabels {
  SpeakerLabel a, b;
};
struct ShiftAll {
  Ms delta_ms = 0;
};
struct SubstituteWords {
  double rate = 0.0;
  std::uint64_t seed = 0;
};
struct DropSegments {
  double rate = 0.0;
  std::uint64_t seed = 0;
};
struct RelabelToUnregistered {
  SpeakerLabel a;
};

using PerturbOp =
    std::variant<SwapLabels, ShiftAll, SubstituteWords, DropSegments, RelabelToUnregistered>;

/// Applies exactly the named mutation; deterministic under the op's seed.
/// The output satisfies all transcript invariants and keeps the source
/// registration.
inline AttributedTranscript perturb(const AttributedTranscript& t, const PerturbOp& op) {
  std::vector<Segment> segments = t.segments();

  if (const auto* swap = std::get_if<SwapLabels>(&op)) {
    if (!t.has_speaker(swap->a.name())) throw UnknownLabelError(swap->a.name());
    if (!t.has_speaker(swap->b.name())) throw UnknownLabelError(swap->b.name());
    for (auto& seg : segments) {
      if (seg.speaker == swap->a)
        seg.speaker = swap->b;
      else if (seg.speaker == swap->b)
        seg.speaker = swap->a;
    }
  } else if (const auto* shift = std::get_if<ShiftAll>(&op)) {
    for (auto& seg : segments) {
      if (seg.start_ms + shift->delta_ms < 0)
        throw Error("shift would move a segment before time zero");
      seg.start_ms += shift->delta_ms;
      seg.end_ms += shift->delta_ms;
    }
  } else if (const auto* sub = std::get_if<SubstituteWords>(&op)) {
    SplitMix64 rng(sub->seed);
    for (auto& seg : segments) {
      for (auto& token : seg.tokens) {
        if (rng.unit() < sub->rate) {
          std::string replacement = "p" + std::to_string(rng.below(100000));
          if (replacement == token) replacement += "x";
          token = std::move(replacement);
        }
      }
    }
  } else if (const auto* drop = std::get_if<DropSegments>(&op)) {
    SplitMix64 rng(drop->seed);
    std::vector<Segment> kept;
    kept.reserve(segments.size());
    for (auto& seg : segments)
      if (!(rng.unit() < drop->rate)) kept.push_back(std::move(seg));
    segments = std::move(kept);
  } else if (const auto* relabel = std::get_if<RelabelToUnregistered>(&op)) {
    if (!t.has_speaker(relabel->a.name())) throw UnknownLabelError(relabel->a.name());
    std::string name = relabel->a.name() + "#unreg";
    const auto& reg = t.source_registration();
    while ((reg && reg->contains(name)) || t.has_speaker(name)) name += "#";
    for (auto& seg : segments)
      if (seg.speaker == relabel->a) seg.speaker = SpeakerLabel(name);
  }

  return AttributedTranscript(std::move(segments), t.source_registration());
}

}  // namespace diascore

#endif  // DIASCORE_SYNTH_HPP
