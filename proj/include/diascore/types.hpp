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

#ifndef DIASCORE_TYPES_HPP
#define DIASCORE_TYPES_HPP

/**
 * \file types.hpp
 *
 * Domain types shared across the toolkit: speaker labels, registrations,
 * time-stamped word segments, alignment counters, and duration breakdowns.
 * All types are immutable after construction and safe to share across
 * threads.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "diascore/detail/text.hpp"

namespace diascore {

/// Integer milliseconds. All timing arithmetic is exact.
using Ms = std::int64_t;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A malformed record in one of the textual input formats.
class ParseError : public Error {
 public:
  ParseError(int line, std::string reason)
      : Error("line " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(std::move(reason)) {}

  int line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  int line_;
  std::string reason_;
};

class DuplicateLabelError : public Error {
 public:
  explicit DuplicateLabelError(const std::string& label)
      : Error("duplicate speaker label: " + label) {}
};

class EmptyRegistrationError : public Error {
 public:
  EmptyRegistrationError() : Error("registration has no entries") {}
};

class EmptyReferenceError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class UnknownLabelError : public Error {
 public:
  explicit UnknownLabelError(const std::string& label)
      : Error("unknown speaker label: " + label) {}
};

class UnknownReferenceSpeakerError : public Error {
 public:
  explicit UnknownReferenceSpeakerError(const std::string& label)
      : Error("reference speaker not in registration: " + label) {}
};

class UnitMismatchError : public Error {
 public:
  UnitMismatchError() : Error("bounding boxes use different coordinate units") {}
};

class DimensionTooLargeError : public Error {
 public:
  using Error::Error;
};

class WrongArityError : public Error {
 public:
  using Error::Error;
};

class ManifestError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Speaker identity
// ---------------------------------------------------------------------------

/**
 * A case-sensitive speaker name. Surrounding whitespace is trimmed at
 * construction; the trimmed name must be non-empty and may not contain a
 * newline. The name may contain ':' — the textual record formats escape it
 * as "\:" so that an unescaped colon always delimits the label.
 */
class SpeakerLabel {
 public:
  explicit SpeakerLabel(std::string_view name) : name_(detail::trim(name)) {
    if (name_.empty()) throw Error("speaker label is empty");
    if (name_.find('\n') != std::string::npos || name_.find('\r') != std::string::npos)
      throw Error("speaker label contains a newline");
  }

  const std::string& name() const { return name_; }

  friend bool operator==(const SpeakerLabel& a, const SpeakerLabel& b) {
    return a.name_ == b.name_;
  }
  friend auto operator<=>(const SpeakerLabel& a, const SpeakerLabel& b) {
    return a.name_ <=> b.name_;
  }

 private:
  std::string name_;
};

/**
 * The registered speaker set: an ordered list of (label, description)
 * pairs with pairwise-distinct labels. Descriptions are opaque text.
 */
class Registration {
 public:
  struct Entry {
    SpeakerLabel label;
    std::string description;
  };

  explicit Registration(std::vector<Entry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw EmptyRegistrationError();
    for (std::size_t i = 0; i < entries_.size(); ++i)
      for (std::size_t j = i + 1; j < entries_.size(); ++j)
        if (entries_[i].label == entries_[j].label)
          throw DuplicateLabelError(entries_[i].label.name());
  }

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  bool contains(const SpeakerLabel& label) const { return contains(label.name()); }
  bool contains(std::string_view name) const {
    for (const auto& e : entries_)
      if (e.label.name() == name) return true;
    return false;
  }

  std::vector<SpeakerLabel> labels() const {
    std::vector<SpeakerLabel> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.label);
    return out;
  }

  friend bool operator==(const Registration& a, const Registration& b) {
    if (a.entries_.size() != b.entries_.size()) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i)
      if (!(a.entries_[i].label == b.entries_[i].label) ||
          a.entries_[i].description != b.entries_[i].description)
        return false;
    return true;
  }

 private:
  std::vector<Entry> entries_;
};

// ---------------------------------------------------------------------------
// Transcript
// ---------------------------------------------------------------------------

/// One speaker-attributed, time-stamped stretch of speech.
/// Invariant (enforced by AttributedTranscript): 0 <= start_ms <= end_ms.
struct Segment {
  SpeakerLabel speaker;
  Ms start_ms = 0;
  Ms end_ms = 0;
  std::vector<std::string> tokens;

  Ms duration_ms() const { return end_ms - start_ms; }

  friend bool operator==(const Segment& a, const Segment& b) {
    return a.speaker == b.speaker && a.start_ms == b.start_ms &&
           a.end_ms == b.end_ms && a.tokens == b.tokens;
  }
};

/**
 * An ordered set of segments, stably sorted by (start_ms, end_ms, input
 * order). Zero-duration segments are retained: they carry words but no
 * time. The optional registration records which speaker set the transcript
 * was produced against.
 */
class AttributedTranscript {
 public:
  AttributedTranscript() = default;

  explicit AttributedTranscript(std::vector<Segment> segments,
                                std::optional<Registration> source_registration = std::nullopt)
      : segments_(std::move(segments)),
        registration_(std::move(source_registration)) {
    for (const auto& s : segments_) {
      if (s.start_ms < 0)
        throw Error("segment start is negative: " + std::to_string(s.start_ms));
      if (s.end_ms < s.start_ms)
        throw Error("segment ends before it starts: [" + std::to_string(s.start_ms) +
                    ", " + std::to_string(s.end_ms) + "]");
    }
    input_was_sorted_ = std::is_sorted(segments_.begin(), segments_.end(),
                                       [](const Segment& a, const Segment& b) {
                                         return std::pair(a.start_ms, a.end_ms) <
                                                std::pair(b.start_ms, b.end_ms);
                                       });
    std::stable_sort(segments_.begin(), segments_.end(),
                     [](const Segment& a, const Segment& b) {
                       return std::pair(a.start_ms, a.end_ms) <
                              std::pair(b.start_ms, b.end_ms);
                     });
  }

  const std::vector<Segment>& segments() const { return segments_; }
  const std::optional<Registration>& source_registration() const { return registration_; }
  bool empty() const { return segments_.empty(); }
  bool input_was_sorted() const { return input_was_sorted_; }

  /// Distinct speakers in order of first (sorted) appearance.
  std::vector<SpeakerLabel> speakers() const {
    std::vector<SpeakerLabel> out;
    for (const auto& s : segments_) {
      bool seen = false;
      for (const auto& l : out)
        if (l == s.speaker) { seen = true; break; }
      if (!seen) out.push_back(s.speaker);
    }
    return out;
  }

  bool has_speaker(std::string_view name) const {
    for (const auto& s : segments_)
      if (s.speaker.name() == name) return true;
    return false;
  }

  Ms max_end_ms() const {
    Ms t = 0;
    for (const auto& s : segments_) t = std::max(t, s.end_ms);
    return t;
  }

 private:
  std::vector<Segment> segments_;
  std::optional<Registration> registration_;
  bool input_was_sorted_ = true;
};

// ---------------------------------------------------------------------------
// Metric carriers
// ---------------------------------------------------------------------------

/**
 * Word-level alignment counts. Bookkeeping identities:
 *   corrects + substitutions + deletions  == reference length
 *   corrects + substitutions + insertions == hypothesis length
 */
struct AlignmentResult {
  std::int64_t substitutions = 0;
  std::int64_t deletions = 0;
  std::int64_t insertions = 0;
  std::int64_t corrects = 0;

  std::int64_t distance() const { return substitutions + deletions + insertions; }

  AlignmentResult& operator+=(const AlignmentResult& o) {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    corrects += o.corrects;
    return *this;
  }

  friend bool operator==(const AlignmentResult&, const AlignmentResult&) = default;
};

/// An exact rational metric value. Most metrics are integer ratios
/// (error words / reference words, error ms / reference ms), so the
/// numerator and denominator are kept to allow exact comparisons and
/// lossless aggregation.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 0;

  double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// Per-speaker time accounting. Conservation: correct + miss + conf == dur.
struct SpeakerTime {
  Ms correct_ms = 0;
  Ms miss_ms = 0;
  Ms fa_ms = 0;
  Ms conf_ms = 0;
  Ms dur_ms = 0;

  friend bool operator==(const SpeakerTime&, const SpeakerTime&) = default;
};

/**
 * The duration decomposition of a (reference, hypothesis) pair against a
 * registered speaker set. Hypothesis speech by unregistered speakers during
 * reference silence is pooled into unregistered_fa_ms, counted once per
 * timeline cell regardless of how many unregistered speakers are active.
 */
struct IerBreakdown {
  std::map<std::string, SpeakerTime> per_speaker;  // keyed by label name
  Ms unregistered_fa_ms = 0;

  Ms error_ms() const {
    Ms e = unregistered_fa_ms;
    for (const auto& [_, t] : per_speaker) e += t.miss_ms + t.fa_ms + t.conf_ms;
    return e;
  }

  Ms total_dur_ms() const {
    Ms d = 0;
    for (const auto& [_, t] : per_speaker) d += t.dur_ms;
    return d;
  }

  friend bool operator==(const IerBreakdown&, const IerBreakdown&) = default;
};

// ---------------------------------------------------------------------------
// Bounding boxes
// ---------------------------------------------------------------------------

enum class BoxUnit { normalized, pixel };

/// Axis-aligned box; valid when x2 > x1 and y2 > y1.
struct BoundingBox {
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  BoxUnit unit = BoxUnit::pixel;

  bool valid() const { return x2 > x1 && y2 > y1; }
  double area() const { return (x2 - x1) * (y2 - y1); }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// A yes/no answer as extracted from free-form response text.
enum class Polarity { yes, no, unparseable };

enum class Subset { none, easy, hard };

inline std::string_view subset_name(Subset s) {
  switch (s) {
    case Subset::easy: return "easy";
    case Subset::hard: return "hard";
    default: return "none";
  }
}

/// One aggregated metric row: a task, a metric name, the exact value, the
/// subset tag, and how many samples contributed.
struct ScoreReport {
  std::string task;
  std::string metric;
  Fraction value;
  Subset subset = Subset::none;
  std::int64_t samples = 0;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class WarningKind { zero_duration, unregistered_speaker, out_of_order, malformed_line };

struct Warning {
  WarningKind kind;
  int line = -1;  // input line when known, else -1
  std::string message;
};

/**
 * Non-mutating sanity checks: reports zero-duration segments, speakers
 * absent from the registration (one warning per distinct speaker), and
 * whether the segments had to be reordered at construction.
 */
inline std::vector<Warning> validate_transcript(const AttributedTranscript& t,
                                                const Registration& r) {
  std::vector<Warning> warnings;
  if (!t.input_was_sorted())
    warnings.push_back({WarningKind::out_of_order, -1,
                        "segments were not in (start, end) order and have been sorted"});
  std::vector<std::string> flagged;
  for (const auto& s : t.segments()) {
    if (s.start_ms == s.end_ms)
      warnings.push_back({WarningKind::zero_duration, -1,
                          "zero-duration segment for speaker '" + s.speaker.name() +
                              "' at " + std::to_string(s.start_ms) + " ms"});
    if (!r.contains(s.speaker) &&
        std::find(flagged.begin(), flagged.end(), s.speaker.name()) == flagged.end()) {
      flagged.push_back(s.speaker.name());
      warnings.push_back({WarningKind::unregistered_speaker, -1,
                          "speaker '" + s.speaker.name() + "' is not registered"});
    }
  }
  return warnings;
}

}  // namespace diascore

#endif  // DIASCORE_TYPES_HPP
