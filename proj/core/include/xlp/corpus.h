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

#ifndef XLP_CORPUS_H_
#define XLP_CORPUS_H_

#include <compare>
#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/container/flat_hash_set.h"
#include "absl/status/statusor.h"

namespace xlp {

// A BIO tag. `label` is empty iff kind is kOutside.
class BioTag {
 public:
  enum class Kind { kOutside, kBegin, kInside };

  BioTag() = default;

  static BioTag Outside() { return BioTag(); }
  static BioTag Begin(std::string label) {
    return BioTag(Kind::kBegin, std::move(label));
  }
  static BioTag Inside(std::string label) {
    return BioTag(Kind::kInside, std::move(label));
  }

  // Accepts exactly "O", "B-<label>" or "I-<label>" with a nonempty,
  // whitespace-free label.
  static absl::StatusOr<BioTag> Parse(std::string_view text);

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  bool is_outside() const { return kind_ == Kind::kOutside; }
  bool is_begin() const { return kind_ == Kind::kBegin; }
  bool is_inside() const { return kind_ == Kind::kInside; }

  std::string ToString() const;

  friend bool operator==(const BioTag&, const BioTag&) = default;
  friend auto operator<=>(const BioTag&, const BioTag&) = default;

 private:
  BioTag(Kind kind, std::string label)
      : kind_(kind), label_(std::move(label)) {}

  Kind kind_ = Kind::kOutside;
  std::string label_;
};

struct Token {
  std::string text;
  BioTag tag;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::vector<Token> tokens;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Corpus {
  std::string language;
  std::vector<Sentence> sentences;

  std::size_t token_count() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// Half-open token index range within one sentence.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

// A maximal B-I-I... run of a single label.
struct EntityChunk {
  std::string label;
  std::size_t sentence_index = 0;
  TokenSpan span;
  std::vector<std::string> surface;

  friend bool operator==(const EntityChunk&, const EntityChunk&) = default;
};

struct ParseOptions {
  // Strips a leading "<language>:" from every token, as found in some
  // WikiANN distributions ("br:Pariz").
  bool strip_language_prefix = false;
};

absl::StatusOr<Corpus> ParseConll(std::istream& input,
                                  std::string_view language,
                                  const ParseOptions& options = {});
absl::StatusOr<Corpus> ParseConll(std::string_view text,
                                  std::string_view language,
                                  const ParseOptions& options = {});
absl::StatusOr<Corpus> LoadConll(const std::string& path,
                                 std::string_view language,
                                 const ParseOptions& options = {});

// Tab-separated, blank line between sentences, trailing newline.
std::string SerializeConll(const Corpus& corpus);

enum class BioMode { kStrict, kRepair };

struct BioViolation {
  std::size_t index = 0;
  std::string description;

  friend bool operator==(const BioViolation&, const BioViolation&) = default;
};

struct BioCheck {
  Sentence sentence;
  std::vector<BioViolation> violations;
};

// Reports every Inside tag not preceded by a Begin/Inside tag of the same
// label. In repair mode each such tag becomes Begin of its label.
BioCheck ValidateBio(const Sentence& sentence, BioMode mode);

// Applies ValidateBio to every sentence; returns the total violation count.
std::size_t RepairCorpus(Corpus& corpus);

bool IsBioValid(const Sentence& sentence);

// Chunks in start order. Fails if the sentence is not BIO-valid.
absl::StatusOr<std::vector<EntityChunk>> ExtractChunks(
    const Sentence& sentence, std::size_t sentence_index = 0);
absl::StatusOr<std::vector<EntityChunk>> ExtractChunks(const Corpus& corpus);

using WordSet = absl::flat_hash_set<std::string>;

// Lowercased text of a token if it qualifies as a content word: longer than
// one code point, free of punctuation and not a stopword. Returns empty
// otherwise. Tag is not inspected.
std::string ContentWordForm(std::string_view text, const WordSet& stopwords);

// Lowercased texts of Outside tokens that pass ContentWordForm.
WordSet ContentWords(const Corpus& corpus, const WordSet& stopwords);

// Word-per-line list, lowercased; blank lines ignored.
absl::StatusOr<WordSet> LoadStopwords(const std::string& path);

}  // namespace xlp

#endif  // XLP_CORPUS_H_
