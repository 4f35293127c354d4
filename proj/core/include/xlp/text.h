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

#ifndef XLP_TEXT_H_
#define XLP_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace xlp {

// Unicode helpers. All strings are UTF-8.

bool IsValidUtf8(std::string_view s);

// Number of Unicode code points in `s`.
std::size_t CodePointLength(std::string_view s);

// Full Unicode lowercase mapping (root locale).
std::string ToLower(std::string_view s);

// True if any code point of `s` is in a Unicode punctuation category (P*).
bool ContainsPunctuation(std::string_view s);

// True if the first code point of `s` is uppercase or titlecase.
bool StartsUppercase(std::string_view s);

// Returns `word` with its first code point title-cased when `model` starts
// with an uppercase letter; otherwise returns `word` unchanged.
std::string MatchCapitalization(std::string_view word, std::string_view model);

// Splits on runs of Unicode whitespace; never yields empty pieces.
std::vector<std::string> SplitWhitespace(std::string_view s);

bool ContainsWhitespace(std::string_view s);

// Byte range of one word inside a larger text.
struct TextSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Segments running text into words: whitespace separates words, and a
// change between punctuation and non-punctuation characters also starts a
// new word, so "logo'r" yields "logo", "'", "r". Spans index into `text`.
std::vector<TextSpan> SegmentWords(std::string_view text);

// Prefix of `text` holding its first `max_code_points` code points.
std::string_view TruncateCodePoints(std::string_view text,
                                    std::size_t max_code_points);

}  // namespace xlp

#endif  // XLP_TEXT_H_
