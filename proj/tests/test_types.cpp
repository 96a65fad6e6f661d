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

#include <catch2/catch_amalgamated.hpp>

#include "diascore/types.hpp"

using namespace diascore;

namespace {

Registration make_registration(std::initializer_list<const char*> names) {
  std::vector<Registration::Entry> entries;
  for (const char* n : names) entries.push_back({SpeakerLabel(n), "desc"});
  return Registration(std::move(entries));
}

}  // namespace

TEST_CASE("speaker labels trim and validate") {
  CHECK(SpeakerLabel("  Alice  ").name() == "Alice");
  CHECK(SpeakerLabel("Alice").name() == "Alice");
  CHECK_THROWS_AS(SpeakerLabel(""), Error);
  CHECK_THROWS_AS(SpeakerLabel("   "), Error);
  CHECK_THROWS_AS(SpeakerLabel("a\nb"), Error);
}

TEST_CASE("labels are case-sensitive") {
  CHECK_FALSE(SpeakerLabel("alice") == SpeakerLabel("Alice"));
}

TEST_CASE("registration rejects duplicates and emptiness") {
  CHECK_THROWS_AS(Registration({}), EmptyRegistrationError);
  std::vector<Registration::Entry> dup = {{SpeakerLabel("A"), "d1"}, {SpeakerLabel("A"), "d2"}};
  CHECK_THROWS_AS(Registration(std::move(dup)), DuplicateLabelError);

  const auto reg = make_registration({"Alice", "Bob"});
  CHECK(reg.size() == 2);
  CHECK(reg.contains("Alice"));
  CHECK_FALSE(reg.contains("Charlie"));
}

TEST_CASE("transcript sorts segments stably by (start, end)") {
  std::vector<Segment> segs = {
      {SpeakerLabel("B"), 5000, 6000, {"late"}},
      {SpeakerLabel("A"), 0, 2000, {"first"}},
      {SpeakerLabel("C"), 0, 2000, {"tied"}},  // same key as A's after sorting: input order kept
  };
  const AttributedTranscript t(std::move(segs));
  REQUIRE(t.segments().size() == 3);
  CHECK(t.segments()[0].speaker.name() == "A");
  CHECK(t.segments()[1].speaker.name() == "C");
  CHECK(t.segments()[2].speaker.name() == "B");
  CHECK_FALSE(t.input_was_sorted());
  CHECK(t.max_end_ms() == 6000);
}

TEST_CASE("transcript rejects invalid segments") {
  CHECK_THROWS_AS(AttributedTranscript({{SpeakerLabel("A"), -1, 5, {}}}), Error);
  CHECK_THROWS_AS(AttributedTranscript({{SpeakerLabel("A"), 10, 5, {}}}), Error);
  CHECK_NOTHROW(AttributedTranscript({{SpeakerLabel("A"), 5, 5, {}}}));  // zero duration is legal
}

TEST_CASE("validate_transcript finds nothing on a clean transcript") {
  const auto reg = make_registration({"Alice", "Bob"});
  const AttributedTranscript t({{SpeakerLabel("Alice"), 0, 1000, {"hi"}},
                                {SpeakerLabel("Bob"), 1000, 2000, {"yo"}}});
  CHECK(validate_transcript(t, reg).empty());
}

TEST_CASE("validate_transcript flags unregistered speakers once each") {
  const auto reg = make_registration({"Alice", "Bob"});
  const AttributedTranscript t({{SpeakerLabel("Charlie"), 0, 1000, {}},
                                {SpeakerLabel("Charlie"), 2000, 3000, {}}});
  const auto warnings = validate_transcript(t, reg);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].kind == WarningKind::unregistered_speaker);
}

TEST_CASE("validate_transcript flags zero-duration segments") {
  const auto reg = make_registration({"Alice"});
  const AttributedTranscript t({{SpeakerLabel("Alice"), 5000, 5000, {"word"}}});
  const auto warnings = validate_transcript(t, reg);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].kind == WarningKind::zero_duration);
}

TEST_CASE("validate_transcript reports reordered input") {
  const auto reg = make_registration({"Alice", "Bob"});
  const AttributedTranscript t({{SpeakerLabel("Bob"), 2000, 3000, {}},
                                {SpeakerLabel("Alice"), 0, 1000, {}}});
  const auto warnings = validate_transcript(t, reg);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].kind == WarningKind::out_of_order);
}

TEST_CASE("alignment result identities") {
  AlignmentResult r{1, 2, 3, 4};
  CHECK(r.distance() == 6);
  AlignmentResult sum;
  sum += r;
  sum += r;
  CHECK(sum.distance() == 12);
  CHECK(sum.corrects == 8);
}

TEST_CASE("ier breakdown sums") {
  IerBreakdown b;
  b.per_speaker["A"] = {800, 100, 50, 100, 1000};
  b.per_speaker["B"] = {500, 0, 0, 0, 500};
  b.unregistered_fa_ms = 25;
  CHECK(b.error_ms() == 100 + 50 + 100 + 25);
  CHECK(b.total_dur_ms() == 1500);
}

TEST_CASE("fraction value handles the empty denominator") {
  CHECK(Fraction{0, 0}.value() == 0.0);
  CHECK(Fraction{1, 4}.value() == 0.25);
}
