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

#include "xlp/lexicon.h"

#include <algorithm>
#include <sstream>

#include "xlp/file_util.h"
#include "xlp/status_macros.h"
#include "xlp/text.h"
#include "str_util.h"

namespace xlp {
namespace {

// Trims and collapses internal whitespace to single spaces.
std::string NormalizeEntry(std::string_view entry) {
  std::vector<std::string> words = SplitWhitespace(entry);
  std::string out;
  for (const std::string& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

}  // namespace

std::string_view LexiconKindName(LexiconKind kind) {
  return kind == LexiconKind::kGivenNames ? "GivenNames" : "Places";
}

absl::StatusOr<LexiconKind> ParseLexiconKind(std::string_view name) {
  if (name == "GivenNames" || name == "given-names") {
    return LexiconKind::kGivenNames;
  }
  if (name == "Places" || name == "places") return LexiconKind::kPlaces;
  return absl::InvalidArgumentError(
      StrCat("unknown lexicon kind '", name, "'"));
}

Lexicon::Lexicon(std::string language, LexiconKind kind,
                 std::vector<std::string> entries)
    : language_(std::move(language)), kind_(kind) {
  entries_.reserve(entries.size());
  for (const std::string& e : entries) {
    std::string normalized = NormalizeEntry(e);
    if (!normalized.empty()) entries_.push_back(std::move(normalized));
  }
  // std::string compares bytes, which for UTF-8 is code point order.
  std::sort(entries_.begin(), entries_.end());
  entries_.erase(std::unique(entries_.begin(), entries_.end()),
                 entries_.end());
}

absl::StatusOr<std::string> Lexicon::Sample(Rng& rng) const {
  if (entries_.empty()) {
    return absl::FailedPreconditionError(
        StrCat("empty ", LexiconKindName(kind_), " lexicon for '",
                     language_, "'"));
  }
  return entries_[rng.Uniform(entries_.size())];
}

absl::StatusOr<Lexicon> ParseLexicon(std::string_view text) {
  std::vector<std::string_view> lines = StrSplit(text, '\n');
  if (lines.empty() || !lines.front().starts_with("#")) {
    return absl::InvalidArgumentError(
        "lexicon line 1: missing '#lang=<code> kind=<kind>' header");
  }
  std::string_view header = StripSuffix(lines.front(), "\r");
  header.remove_prefix(1);
  std::string language;
  std::string kind_name;
  for (std::string_view field :
       SplitAnySkipEmpty(header, " ")) {
    if (ConsumePrefix(&field, "lang=")) {
      language = std::string(field);
    } else if (ConsumePrefix(&field, "kind=")) {
      kind_name = std::string(field);
    }
  }
  if (language.empty() || kind_name.empty()) {
    return absl::InvalidArgumentError(
        "lexicon line 1: header needs lang= and kind=");
  }
  XLP_ASSIGN_OR_RETURN(LexiconKind kind, ParseLexiconKind(kind_name));
  std::vector<std::string> entries;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::string_view line = StripSuffix(lines[i], "\r");
    if (!IsValidUtf8(line)) {
      return absl::InvalidArgumentError(
          StrCat("lexicon line ", i + 1, ": invalid UTF-8"));
    }
    entries.emplace_back(line);
  }
  return Lexicon(std::move(language), kind, std::move(entries));
}

absl::StatusOr<Lexicon> LoadLexicon(const std::string& path) {
  XLP_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  auto lexicon = ParseLexicon(text);
  if (!lexicon.ok()) {
    return absl::Status(lexicon.status().code(),
                        StrCat(path, ": ", lexicon.status().message()));
  }
  return lexicon;
}

std::string SerializeLexicon(const Lexicon& lexicon) {
  std::string out = StrCat("#lang=", lexicon.language(),
                                 " kind=", LexiconKindName(lexicon.kind()),
                                 "\n");
  for (const std::string& e : lexicon.entries()) StrAppend(&out, e, "\n");
  return out;
}

absl::Status SaveLexicon(const Lexicon& lexicon, const std::string& path) {
  return WriteFileAtomically(path, SerializeLexicon(lexicon));
}

}  // namespace xlp
