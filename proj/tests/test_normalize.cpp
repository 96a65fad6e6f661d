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

#include "diascore/normalize.hpp"
#include "diascore/synth.hpp"

using namespace diascore;

TEST_CASE("default normalization lowercases and strips punctuation") {
  CHECK(normalize("Our first topic is Family...") ==
        std::vector<std::string>{"our", "first", "topic", "is", "family"});
  CHECK(normalize("who am i") == std::vector<std::string>{"who", "am", "i"});
  CHECK(normalize("").empty());
  CHECK(normalize("   \t \n ").empty());
}

TEST_CASE("intra-word apostrophes survive, edge apostrophes do not") {
  CHECK(normalize("don't stop") == std::vector<std::string>{"don't", "stop"});
  CHECK(normalize("'quoted'") == std::vector<std::string>{"quoted"});
  CHECK(normalize("rock 'n' roll") == std::vector<std::string>{"rock", "n", "roll"});
  // Curly apostrophe folds to the straight one.
  CHECK(normalize("don’t") == std::vector<std::string>{"don't"});
}

TEST_CASE("punctuation separates words") {
  CHECK(normalize("well-known,fact") == std::vector<std::string>{"well", "known", "fact"});
  CHECK(normalize("a.b.c") == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("config flags change behavior") {
  NormalizationConfig keep_case;
  keep_case.lowercase = false;
  CHECK(normalize("Hello World", keep_case) == std::vector<std::string>{"Hello", "World"});

  NormalizationConfig keep_punct;
  keep_punct.strip_punctuation = false;
  CHECK(normalize("family...", keep_punct) == std::vector<std::string>{"family..."});

  NormalizationConfig spell;
  spell.digit_policy = NormalizationConfig::DigitPolicy::spell_out;
  CHECK(normalize("room 42", spell) ==
        std::vector<std::string>{"room", "four", "two"});
  CHECK(normalize("room 42") == std::vector<std::string>{"room", "42"});
}

TEST_CASE("unicode content tokenizes") {
  CHECK(normalize("café München") ==
        std::vector<std::string>{"café", "münchen"});
  // NFC: decomposed e + combining acute composes to the same token.
  CHECK(normalize("café") == normalize("café"));
}

TEST_CASE("invalid utf-8 never crashes the normalizer") {
  const std::string junk = "ab\xff\xfe cd \xc3";
  CHECK_NOTHROW(normalize(junk));
}

TEST_CASE("normalization is idempotent over join") {
  const std::vector<std::string> inputs = {
      "Our first topic is Family...", "don't STOP, now!", "a-b c;d 'e'", "café 42",
      "  spaced   out  "};
  for (const auto& cfg : {NormalizationConfig{}, NormalizationConfig{false, true},
                          NormalizationConfig{true, false}}) {
    for (const auto& text : inputs) {
      const auto once = normalize(text, cfg);
      CHECK(normalize(join_tokens(once), cfg) == once);
    }
  }
}

TEST_CASE("idempotence holds on random strings") {
  SplitMix64 rng(2026);
  const std::string alphabet = "abcXYZ 0'9.,-!é";
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const auto len = rng.below(24);
    for (std::uint64_t i = 0; i < len; ++i)
      text.push_back(alphabet[rng.below(alphabet.size())]);
    const auto once = normalize(text);
    CHECK(normalize(join_tokens(once)) == once);
    for (const auto& token : once) {
      CHECK_FALSE(token.empty());
      CHECK(token.find(' ') == std::string::npos);
      CHECK(token.find('\t') == std::string::npos);
    }
  }
}
