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

#ifndef XLP_SRC_STR_UTIL_H_
#define XLP_SRC_STR_UTIL_H_

// String helpers over std::string_view. The system abseil is built with its
// own string_view type, so its string utilities do not accept ours.

#include <charconv>
#include <iterator>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

#include "absl/strings/string_view.h"
#include "fmt/format.h"
#include "fmt/printf.h"

namespace xlp {
namespace internal {

template <typename T>
decltype(auto) Formattable(const T& value) {
  if constexpr (std::is_same_v<T, absl::string_view>) {
    return std::string_view(value.data(), value.size());
  } else {
    return (value);
  }
}

}  // namespace internal

template <typename... Args>
void StrAppend(std::string* out, const Args&... args) {
  (fmt::format_to(std::back_inserter(*out), "{}",
                  internal::Formattable(args)),
   ...);
}

template <typename... Args>
std::string StrCat(const Args&... args) {
  std::string out;
  StrAppend(&out, args...);
  return out;
}

template <typename... Args>
std::string StrFormat(std::string_view format, const Args&... args) {
  return fmt::sprintf(format, args...);
}

template <typename Range>
std::string StrJoin(const Range& parts, std::string_view sep) {
  std::string out;
  bool first = true;
  for (const auto& p : parts) {
    if (!first) out.append(sep);
    first = false;
    out.append(p);
  }
  return out;
}

// Splits on every occurrence of `sep`, keeping empty fields.
inline std::vector<std::string_view> StrSplit(std::string_view text,
                                              char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

// Splits on any of `seps`, dropping empty fields.
inline std::vector<std::string_view> SplitAnySkipEmpty(std::string_view text,
                                                       std::string_view seps) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t pos = text.find_first_of(seps, start);
    if (pos == std::string_view::npos) pos = text.size();
    if (pos > start) out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline std::string_view StripSuffix(std::string_view s,
                                    std::string_view suffix) {
  if (s.ends_with(suffix)) s.remove_suffix(suffix.size());
  return s;
}

inline bool ConsumePrefix(std::string_view* s, std::string_view prefix) {
  if (!s->starts_with(prefix)) return false;
  s->remove_prefix(prefix.size());
  return true;
}

inline std::string_view StripAsciiWhitespace(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const std::size_t b = s.find_first_not_of(kSpace);
  if (b == std::string_view::npos) return {};
  const std::size_t e = s.find_last_not_of(kSpace);
  return s.substr(b, e - b + 1);
}

// Whole-string numeric parse; rejects trailing garbage.
template <typename T>
bool ParseNumber(std::string_view s, T* out) {
  s = StripAsciiWhitespace(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline absl::string_view ToAbsl(std::string_view s) {
  return absl::string_view(s.data(), s.size());
}

}  // namespace xlp

#endif  // XLP_SRC_STR_UTIL_H_
