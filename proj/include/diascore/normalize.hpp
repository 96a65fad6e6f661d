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

#ifndef DIASCORE_NORMALIZE_HPP
#define DIASCORE_NORMALIZE_HPP

/**
 * \file normalize.hpp
 *
 * The single normalization authority: every word-error number in the
 * toolkit depends on how raw content strings become token sequences, so
 * all of that lives here.
 *
 * Pipeline: NFC-normalize, then scan code points. Whitespace separates
 * tokens; with punctuation stripping enabled, punctuation and symbol code
 * points also separate tokens, except apostrophes inside a word ("don't").
 * Lowercasing uses the locale-independent simple mapping. The function is
 * total: invalid UTF-8 is replaced with U+FFFD, never rejected.
 */

#include <string>
#include <string_view>
#include <vector>

#include <unicode/uchar.h>
#include <unicode/unorm2.h>
#include <unicode/ustring.h>
#include <unicode/utf8.h>

namespace diascore {

struct NormalizationConfig {
  enum class DigitPolicy { keep, spell_out };

  bool lowercase = true;
  bool strip_punctuation = true;  // apostrophes within words are retained
  DigitPolicy digit_policy = DigitPolicy::keep;
  // Whitespace collapsing is unconditional.
};

namespace detail {

inline bool all_ascii(std::string_view s) {
  for (unsigned char c : s)
    if (c >= 0x80) return false;
  return true;
}

// NFC via ICU. ASCII input is returned as-is; malformed UTF-8 is
// substituted with U+FFFD so the function never fails.
inline std::string nfc(std::string_view text) {
  if (all_ascii(text)) return std::string(text);

  UErrorCode status = U_ZERO_ERROR;
  const UNormalizer2* nfc = unorm2_getNFCInstance(&status);
  if (U_FAILURE(status)) return std::string(text);

  std::u16string utf16(text.size() + 1, u'\0');
  int32_t len16 = 0;
  status = U_ZERO_ERROR;
  u_strFromUTF8WithSub(utf16.data(), static_cast<int32_t>(utf16.size()), &len16,
                       text.data(), static_cast<int32_t>(text.size()), 0xFFFD,
                       nullptr, &status);
  if (U_FAILURE(status)) return std::string(text);
  utf16.resize(static_cast<std::size_t>(len16));

  std::u16string normalized(utf16.size() * 3 + 16, u'\0');
  status = U_ZERO_ERROR;
  int32_t norm_len = unorm2_normalize(nfc, utf16.data(), static_cast<int32_t>(utf16.size()),
                                      normalized.data(), static_cast<int32_t>(normalized.size()),
                                      &status);
  if (U_FAILURE(status)) return std::string(text);
  normalized.resize(static_cast<std::size_t>(norm_len));

  std::string out(normalized.size() * 4 + 16, '\0');
  int32_t len8 = 0;
  status = U_ZERO_ERROR;
  u_strToUTF8(out.data(), static_cast<int32_t>(out.size()), &len8, normalized.data(),
              static_cast<int32_t>(normalized.size()), &status);
  if (U_FAILURE(status)) return std::string(text);
  out.resize(static_cast<std::size_t>(len8));
  return out;
}

inline bool is_apostrophe(UChar32 cp) {
  return cp == '\'' || cp == 0x2019;  // straight or right single quotation mark
}

inline bool is_separator_punct(UChar32 cp) {
  if (u_ispunct(cp)) return true;
  const auto type = u_charType(cp);
  return type == U_MATH_SYMBOL || type == U_CURRENCY_SYMBOL ||
         type == U_MODIFIER_SYMBOL || type == U_OTHER_SYMBOL;
}

inline void append_utf8(std::string& out, UChar32 cp) {
  char buf[U8_MAX_LENGTH];
  int32_t i = 0;
  UBool err = false;
  U8_APPEND(buf, i, U8_MAX_LENGTH, cp, err);
  if (!err) out.append(buf, static_cast<std::size_t>(i));
}

inline const char* digit_word(UChar32 cp) {
  static const char* words[10] = {"zero", "one", "two",   "three", "four",
                                  "five", "six", "seven", "eight", "nine"};
  return words[cp - '0'];
}

}  // namespace detail

/// Turns raw content into comparable word tokens. Deterministic; tokens
/// are non-empty and contain no whitespace.
inline std::vector<std::string> normalize(std::string_view text,
                                          const NormalizationConfig& cfg = {}) {
  const std::string composed = detail::nfc(text);

  std::vector<std::string> tokens;
  std::string current;
  bool pending_apostrophe = false;  // apostrophe seen after a word character

  auto flush = [&]() {
    pending_apostrophe = false;
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  auto commit_apostrophe = [&]() {
    // Only attach an apostrophe once a word character follows it.
    if (pending_apostrophe) {
      current.push_back('\'');
      pending_apostrophe = false;
    }
  };

  const char* data = composed.data();
  const int32_t size = static_cast<int32_t>(composed.size());
  int32_t i = 0;
  while (i < size) {
    UChar32 cp;
    U8_NEXT(data, i, size, cp);
    if (cp < 0) cp = 0xFFFD;

    if (u_isUWhiteSpace(cp) || cp == '\t') {
      flush();
      continue;
    }
    if (detail::is_apostrophe(cp)) {
      if (cfg.strip_punctuation) {
        if (!current.empty()) pending_apostrophe = true;  // keep only if intra-word
      } else {
        current.push_back('\'');
      }
      continue;
    }
    if (cfg.strip_punctuation && detail::is_separator_punct(cp)) {
      flush();
      continue;
    }
    if (cfg.digit_policy == NormalizationConfig::DigitPolicy::spell_out && cp >= '0' &&
        cp <= '9') {
      flush();
      tokens.emplace_back(detail::digit_word(cp));
      continue;
    }
    commit_apostrophe();
    if (cfg.lowercase) cp = u_tolower(cp);
    detail::append_utf8(current, cp);
  }
  flush();
  return tokens;
}

/// Inverse of tokenization up to whitespace: tokens joined by single spaces.
inline std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace diascore

#endif  // DIASCORE_NORMALIZE_HPP
