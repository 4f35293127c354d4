//
// Copyright 2026 The xlp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "xlp/text.h"

#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <cstdint>

namespace xlp {
namespace {

// Decodes the code point at `i`, advancing `i`. Returns a negative value on
// ill-formed input.
UChar32 NextCodePoint(std::string_view s, std::size_t& i) {
  UChar32 c;
  int32_t pos = static_cast<int32_t>(i);
  U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), pos,
          static_cast<int32_t>(s.size()), c);
  i = static_cast<std::size_t>(pos);
  return c;
}

bool IsSpace(UChar32 c) { return u_isUWhiteSpace(c); }

}  // namespace

bool IsValidUtf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    if (NextCodePoint(s, i) < 0) return false;
  }
  return true;
}

std::size_t CodePointLength(std::string_view s) {
  std::size_t n = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    NextCodePoint(s, i);
    ++n;
  }
  return n;
}

std::string ToLower(std::string_view s) {
  bool ascii = true;
  for (char ch : s) {
    if (static_cast<unsigned char>(ch) >= 0x80) {
      ascii = false;
      break;
    }
  }
  std::string out;
  if (ascii) {
    out.reserve(s.size());
    for (char ch : s) {
      out.push_back(ch >= 'A' && ch <= 'Z' ? static_cast<char>(ch - 'A' + 'a')
                                           : ch);
    }
    return out;
  }
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  u.toLower(icu::Locale::getRoot());
  u.toUTF8String(out);
  return out;
}

bool ContainsPunctuation(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    UChar32 c = NextCodePoint(s, i);
    if (c >= 0 && u_ispunct(c)) return true;
  }
  return false;
}

bool StartsUppercase(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = 0;
  UChar32 c = NextCodePoint(s, i);
  return c >= 0 && (u_isupper(c) || u_istitle(c));
}

std::string MatchCapitalization(std::string_view word,
                                std::string_view model) {
  if (word.empty() || !StartsUppercase(model)) return std::string(word);
  std::size_t i = 0;
  UChar32 first = NextCodePoint(word, i);
  if (first < 0) return std::string(word);
  icu::UnicodeString head(first);
  head.toTitle(nullptr, icu::Locale::getRoot(),
               U_TITLECASE_NO_LOWERCASE | U_TITLECASE_NO_BREAK_ADJUSTMENT);
  std::string out;
  head.toUTF8String(out);
  out.append(word.substr(i));
  return out;
}

std::vector<std::string> SplitWhitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  std::size_t start = std::string_view::npos;
  while (i < s.size()) {
    std::size_t at = i;
    UChar32 c = NextCodePoint(s, i);
    if (c >= 0 && IsSpace(c)) {
      if (start != std::string_view::npos) {
        out.emplace_back(s.substr(start, at - start));
        start = std::string_view::npos;
      }
    } else if (start == std::string_view::npos) {
      start = at;
    }
  }
  if (start != std::string_view::npos) out.emplace_back(s.substr(start));
  return out;
}

bool ContainsWhitespace(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    UChar32 c = NextCodePoint(s, i);
    if (c >= 0 && IsSpace(c)) return true;
  }
  return false;
}

std::vector<TextSpan> SegmentWords(std::string_view text) {
  std::vector<TextSpan> out;
  enum class Class { kNone, kWord, kPunct };
  Class current = Class::kNone;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t at = i;
    UChar32 c = NextCodePoint(text, i);
    Class cls = Class::kWord;
    if (c >= 0 && IsSpace(c)) {
      cls = Class::kNone;
    } else if (c >= 0 && u_ispunct(c)) {
      cls = Class::kPunct;
    }
    if (cls != current) {
      if (current != Class::kNone) out.push_back({start, at});
      current = cls;
      start = at;
    }
  }
  if (current != Class::kNone) out.push_back({start, text.size()});
  return out;
}

std::string_view TruncateCodePoints(std::string_view text,
                                    std::size_t max_code_points) {
  std::size_t i = 0;
  for (std::size_t n = 0; n < max_code_points && i < text.size(); ++n) {
    NextCodePoint(text, i);
  }
  return text.substr(0, i);
}

}  // namespace xlp
