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

#ifndef DIASCORE_RECORD_IO_HPP
#define DIASCORE_RECORD_IO_HPP

/**
 * \file record_io.hpp
 *
 * Parsers and emitters for the textual formats:
 *
 *   transcript   one record per line:  <label> ':' <content> '[' <sec> '-' <sec> 's'? ']'
 *   registration entries separated by ';' or newlines:  <label> ':' <description>
 *   RTTM         standard SPEAKER lines (no words)
 *
 * plus answer extraction for verification / multiple-choice responses and
 * bounding-box parsing. Timestamps are decimal seconds converted to integer
 * milliseconds by string arithmetic (round half up at the third decimal),
 * so identical bytes always yield identical structures.
 *
 * Lenient parsing never fails: malformed lines are dropped and reported as
 * warnings. Strict parsing throws ParseError with the offending line.
 */

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "diascore/detail/text.hpp"
#include "diascore/normalize.hpp"
#include "diascore/types.hpp"

namespace diascore {

enum class ParseMode { lenient, strict };

// ---------------------------------------------------------------------------
// Timestamps
// ---------------------------------------------------------------------------

namespace detail {

/// Decimal seconds -> integer ms, exact. Rejects signs, exponents, and
/// anything but digits around one optional '.'.
inline std::optional<Ms> seconds_to_ms(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  const std::size_t dot = s.find('.');
  const std::string_view whole = dot == std::string_view::npos ? s : s.substr(0, dot);
  const std::string_view frac = dot == std::string_view::npos ? "" : s.substr(dot + 1);
  if (whole.empty() && frac.empty()) return std::nullopt;
  for (char c : whole)
    if (c < '0' || c > '9') return std::nullopt;
  for (char c : frac)
    if (c < '0' || c > '9') return std::nullopt;

  Ms ms = 0;
  for (char c : whole) {
    ms = ms * 10 + (c - '0');
    if (ms > 9'000'000'000'000) return std::nullopt;  // overflow guard
  }
  ms *= 1000;
  for (std::size_t i = 0; i < 3; ++i)
    ms += (i < frac.size() ? frac[i] - '0' : 0) * (i == 0 ? 100 : i == 1 ? 10 : 1);
  if (frac.size() > 3 && frac[3] >= '5') ++ms;  // round half up
  return ms;
}

/// Inverse of seconds_to_ms with the fewest decimals in {2, 3} that keep
/// millisecond precision, so two-decimal inputs round-trip byte-identically.
inline std::string ms_to_seconds(Ms ms) {
  std::string out = std::to_string(ms / 1000);
  const Ms rem = ms % 1000;
  out.push_back('.');
  out.push_back(static_cast<char>('0' + rem / 100));
  out.push_back(static_cast<char>('0' + rem / 10 % 10));
  if (rem % 10 != 0) out.push_back(static_cast<char>('0' + rem % 10));
  return out;
}

/// First ':' not preceded by a backslash; npos when absent.
inline std::size_t find_unescaped_colon(std::string_view s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\') {
      ++i;  // skip escaped character
      continue;
    }
    if (s[i] == ':') return i;
  }
  return std::string_view::npos;
}

// Recognized escapes are "\:" and "\\"; any other backslash is literal.
inline std::string unescape_label(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size() && (s[i + 1] == ':' || s[i + 1] == '\\')) {
      out.push_back(s[i + 1]);
      ++i;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

inline std::string escape_label(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == ':' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Transcript records
// ---------------------------------------------------------------------------

struct TranscriptParse {
  AttributedTranscript transcript;
  std::vector<Warning> warnings;
};

/**
 * Parses line-oriented speaker-attributed records. Blank lines are
 * ignored. In lenient mode (default, for model output) malformed lines
 * become warnings; in strict mode (for curated references) the first
 * malformed line throws ParseError.
 */
inline TranscriptParse parse_transcript(std::string_view text,
                                        ParseMode mode = ParseMode::lenient,
                                        const NormalizationConfig& cfg = {}) {
  std::vector<Segment> segments;
  std::vector<Warning> warnings;

  auto fail = [&](int line_no, const std::string& reason) {
    if (mode == ParseMode::strict) throw ParseError(line_no, reason);
    warnings.push_back({WarningKind::malformed_line, line_no, reason});
  };

  const auto lines = detail::split_lines(text);
  for (std::size_t idx = 0; idx < lines.size(); ++idx) {
    const int line_no = static_cast<int>(idx) + 1;
    std::string_view line = detail::trim(lines[idx]);
    if (line.empty()) continue;

    if (line.back() != ']') {
      fail(line_no, "record does not end with a time range");
      continue;
    }
    const std::size_t open = line.rfind('[');
    if (open == std::string_view::npos) {
      fail(line_no, "missing '[' for the time range");
      continue;
    }
    const std::string_view range = line.substr(open + 1, line.size() - open - 2);
    std::string_view times = detail::trim(range);
    if (!times.empty() && (times.back() == 's' || times.back() == 'S'))
      times = detail::trim(times.substr(0, times.size() - 1));
    const std::size_t dash = times.find('-');
    if (dash == std::string_view::npos) {
      fail(line_no, "time range has no '-'");
      continue;
    }
    const auto start = detail::seconds_to_ms(times.substr(0, dash));
    const auto end = detail::seconds_to_ms(times.substr(dash + 1));
    if (!start || !end) {
      fail(line_no, "unreadable timestamp in '" + std::string(times) + "'");
      continue;
    }
    if (*end < *start) {
      fail(line_no, "segment ends before it starts");
      continue;
    }

    const std::string_view head = line.substr(0, open);
    const std::size_t colon = detail::find_unescaped_colon(head);
    if (colon == std::string_view::npos) {
      fail(line_no, "missing label delimiter");
      continue;
    }
    const std::string label_text = detail::unescape_label(detail::trim(head.substr(0, colon)));
    if (detail::trim(label_text).empty()) {
      fail(line_no, "empty speaker label");
      continue;
    }

    segments.push_back({SpeakerLabel(label_text), *start, *end,
                        normalize(head.substr(colon + 1), cfg)});
  }
  return {AttributedTranscript(std::move(segments)), std::move(warnings)};
}

/// Canonical emission: one record per line in segment order. Reparsing an
/// emitted transcript reproduces the same segments.
inline std::string emit_transcript(const AttributedTranscript& t) {
  std::string out;
  for (const auto& seg : t.segments()) {
    out += detail::escape_label(seg.speaker.name());
    out += ": ";
    out += join_tokens(seg.tokens);
    out += " [";
    out += detail::ms_to_seconds(seg.start_ms);
    out += "-";
    out += detail::ms_to_seconds(seg.end_ms);
    out += "s]\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Registration
// ---------------------------------------------------------------------------

/// Entries separated by ';' or newlines, each `<label> ':' <description>`;
/// input order is preserved.
inline Registration parse_registration(std::string_view text) {
  std::vector<Registration::Entry> entries;
  std::string current;
  int line_no = 1;

  auto flush_entry = [&](int at_line) {
    const std::string_view entry = detail::trim(current);
    if (!entry.empty()) {
      const std::size_t colon = detail::find_unescaped_colon(entry);
      if (colon == std::string_view::npos)
        throw ParseError(at_line, "registration entry has no ':' delimiter");
      const std::string label = detail::unescape_label(detail::trim(entry.substr(0, colon)));
      if (detail::trim(label).empty()) throw ParseError(at_line, "empty speaker label");
      entries.push_back({SpeakerLabel(label), std::string(detail::trim(entry.substr(colon + 1)))});
    }
    current.clear();
  };

  for (char c : text) {
    if (c == ';' || c == '\n') {
      flush_entry(line_no);
      if (c == '\n') ++line_no;
    } else {
      current.push_back(c);
    }
  }
  flush_entry(line_no);

  return Registration(std::move(entries));  // throws on duplicates / empty
}

inline std::string emit_registration(const Registration& r) {
  std::string out;
  for (const auto& e : r.entries()) {
    out += detail::escape_label(e.label.name());
    out += ": ";
    out += e.description;
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// RTTM interop
// ---------------------------------------------------------------------------

/// Standard SPEAKER lines: type file channel onset duration <NA> <NA>
/// speaker <NA> <NA>. Words are not carried, so tokens are empty. Comment
/// lines (";;") and non-SPEAKER record types are skipped.
inline AttributedTranscript parse_rttm(std::string_view text) {
  std::vector<Segment> segments;
  const auto lines = detail::split_lines(text);
  for (std::size_t idx = 0; idx < lines.size(); ++idx) {
    const int line_no = static_cast<int>(idx) + 1;
    const std::string_view line = detail::trim(lines[idx]);
    if (line.empty() || line.substr(0, 2) == ";;") continue;

    std::vector<std::string> fields;
    std::istringstream stream{std::string(line)};
    std::string field;
    while (stream >> field) fields.push_back(field);
    if (fields[0] != "SPEAKER") continue;
    if (fields.size() < 8) throw ParseError(line_no, "SPEAKER line has fewer than 8 fields");

    const auto onset = detail::seconds_to_ms(fields[3]);
    const auto duration = detail::seconds_to_ms(fields[4]);
    if (!onset) throw ParseError(line_no, "unreadable onset '" + fields[3] + "'");
    if (!duration) throw ParseError(line_no, "unreadable duration '" + fields[4] + "'");
    segments.push_back({SpeakerLabel(fields[7]), *onset, *onset + *duration, {}});
  }
  return AttributedTranscript(std::move(segments));
}

/// Millisecond-exact emission; speaker names with whitespace are not
/// representable in the whitespace-delimited format and get '_' instead.
inline std::string emit_rttm(const AttributedTranscript& t, std::string_view file_id = "file",
                             int channel = 1) {
  std::string out;
  for (const auto& seg : t.segments()) {
    std::string name = seg.speaker.name();
    for (char& c : name)
      if (detail::is_ascii_space(c)) c = '_';
    out += "SPEAKER ";
    out += file_id;
    out += " " + std::to_string(channel) + " ";
    out += detail::ms_to_seconds(seg.start_ms);
    out += " ";
    out += detail::ms_to_seconds(seg.end_ms - seg.start_ms);
    out += " <NA> <NA> " + name + " <NA> <NA>\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Answer extraction
// ---------------------------------------------------------------------------

namespace detail {

/// Case-folded alphanumeric word tokens of a free-form response.
inline std::vector<std::string> response_words(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (char c : text) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      current.push_back(c);
    } else if (c >= 'A' && c <= 'Z') {
      current.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

}  // namespace detail

/// Polarity of the first standalone yes/no token after case-folding;
/// unparseable when neither occurs.
inline Polarity extract_binary_answer(std::string_view text) {
  for (const auto& word : detail::response_words(text)) {
    if (word == "yes") return Polarity::yes;
    if (word == "no") return Polarity::no;
  }
  return Polarity::unparseable;
}

struct ChoiceOption {
  std::string letter;  // "A".."D" (extensible)
  std::string text;    // full option text, may be empty
};

/**
 * Resolves a multiple-choice response. If exactly one distinct option
 * letter occurs as a standalone token (case-folded), that option wins; two
 * or more distinct letters are ambiguous. With no standalone letter, the
 * unique option whose full text occurs in the response wins. Returns
 * nullopt when unparseable.
 */
inline std::optional<std::string> extract_choice(std::string_view text,
                                                 std::span<const ChoiceOption> options) {
  const auto words = detail::response_words(text);
  std::vector<std::string> seen;
  for (const auto& word : words) {
    for (const auto& opt : options) {
      if (word == detail::ascii_lower(opt.letter) &&
          std::find(seen.begin(), seen.end(), opt.letter) == seen.end())
        seen.push_back(opt.letter);
    }
  }
  if (seen.size() == 1) return seen.front();
  if (seen.size() > 1) return std::nullopt;  // ambiguous

  const std::string lowered = detail::ascii_lower(text);
  std::vector<std::string> matches;
  for (const auto& opt : options) {
    if (opt.text.empty()) continue;
    if (lowered.find(detail::ascii_lower(opt.text)) != std::string::npos)
      matches.push_back(opt.letter);
  }
  if (matches.size() == 1) return matches.front();
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Bounding boxes
// ---------------------------------------------------------------------------

namespace detail {

inline std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

inline std::optional<std::vector<double>> parse_number_group(std::string_view inside) {
  std::vector<double> numbers;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = inside.find(',', pos);
    const std::string_view part =
        comma == std::string_view::npos ? inside.substr(pos) : inside.substr(pos, comma - pos);
    const auto number = parse_number(part);
    if (!number) return std::nullopt;
    numbers.push_back(*number);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return numbers;
}

}  // namespace detail

/**
 * Finds the first `[x1, y1, x2, y2]` or `(x1, y1, x2, y2)` group in the
 * text (surrounding prose is ignored) and validates it. Coordinates all
 * <= 1.0 are flagged normalized, otherwise pixel.
 */
inline BoundingBox parse_bbox(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '[' && text[i] != '(') continue;
    const char close = text[i] == '[' ? ']' : ')';
    const std::size_t j = text.find(close, i + 1);
    if (j == std::string_view::npos) continue;
    const auto numbers = detail::parse_number_group(text.substr(i + 1, j - i - 1));
    if (!numbers) continue;
    if (numbers->size() != 4)
      throw ParseError(1, "bounding box needs exactly 4 numbers, got " +
                              std::to_string(numbers->size()));
    BoundingBox box{(*numbers)[0], (*numbers)[1], (*numbers)[2], (*numbers)[3],
                    BoxUnit::pixel};
    if (!box.valid()) throw ParseError(1, "bounding box is empty (x2 <= x1 or y2 <= y1)");
    if (box.x1 <= 1.0 && box.y1 <= 1.0 && box.x2 <= 1.0 && box.y2 <= 1.0)
      box.unit = BoxUnit::normalized;
    return box;
  }
  throw ParseError(1, "no bounding box found");
}

inline std::optional<BoundingBox> try_parse_bbox(std::string_view text) {
  try {
    return parse_bbox(text);
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("failed while writing " + path.string());
}

}  // namespace diascore

#endif  // DIASCORE_RECORD_IO_HPP
