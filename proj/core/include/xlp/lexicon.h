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

#ifndef XLP_LEXICON_H_
#define XLP_LEXICON_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "xlp/rng.h"

namespace xlp {

enum class LexiconKind { kGivenNames, kPlaces };

std::string_view LexiconKindName(LexiconKind kind);  // "GivenNames", "Places"
absl::StatusOr<LexiconKind> ParseLexiconKind(std::string_view name);

// Language-tagged list of given names or placenames. Entries are unique,
// never blank, and kept in code point order.
class Lexicon {
 public:
  Lexicon(std::string language, LexiconKind kind,
          std::vector<std::string> entries = {});

  const std::string& language() const { return language_; }
  LexiconKind kind() const { return kind_; }
  const std::vector<std::string>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  // Uniform draw. Fails on an empty lexicon.
  absl::StatusOr<std::string> Sample(Rng& rng) const;

  friend bool operator==(const Lexicon&, const Lexicon&) = default;

 private:
  std::string language_;
  LexiconKind kind_;
  std::vector<std::string> entries_;
};

// File format: "#lang=<code> kind=<GivenNames|Places>" then one entry per
// line. Blank lines are ignored.
absl::StatusOr<Lexicon> ParseLexicon(std::string_view text);
absl::StatusOr<Lexicon> LoadLexicon(const std::string& path);
std::string SerializeLexicon(const Lexicon& lexicon);
absl::Status SaveLexicon(const Lexicon& lexicon, const std::string& path);

}  // namespace xlp

#endif  // XLP_LEXICON_H_
