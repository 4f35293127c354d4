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

#ifndef XLP_OVERLAP_H_
#define XLP_OVERLAP_H_

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "xlp/corpus.h"
#include "xlp/text.h"
#include "xlp/title_task.h"

namespace xlp {

struct OverlapReport {
  std::size_t shared_count = 0;
  std::size_t total_count = 0;

  double percent() const {
    return 100.0 * static_cast<double>(shared_count) /
           static_cast<double>(total_count);
  }
};

struct WordPartition {
  WordSet common;
  WordSet unique;
};

// (label, lowercased surface words joined by single spaces).
using EntityKey = std::pair<std::string, std::string>;

struct EntityPartition {
  std::set<EntityKey> common_entities;
  std::map<std::string, std::set<std::string>> unique_by_label;
};

enum class NerDenominator {
  // L2-test tokens that are not tagged O.
  kEntityTokens,
  // Every L2-test token.
  kAllTokens,
};

// Token-level share of L2-test entity tokens whose (lowercased text, full
// tag) pair also occurs among L1-train entity tokens.
absl::StatusOr<OverlapReport> NerWordOverlap(
    const Corpus& l1_train, const Corpus& l2_test,
    NerDenominator denominator = NerDenominator::kEntityTokens);

// Splits one section text into word pieces. Returned spans index the text.
using WordSegmenter = std::function<std::vector<TextSpan>(std::string_view)>;

// Selects the region of a section text that a model would see.
class TitleTruncation {
 public:
  static constexpr std::size_t kDefaultTokens = 128;

  // First `max_words` words under the default segmenter.
  static TitleTruncation Words(std::size_t max_words = kDefaultTokens);

  // Per-text boundaries from an externally produced sidecar. Each line is
  // "<sha256 of text>\t<model token count>\t<code point boundary>", the
  // boundary marking where the first 128 model tokens end.
  static absl::StatusOr<TitleTruncation> FromSidecar(std::string_view text);
  static absl::StatusOr<TitleTruncation> LoadSidecar(const std::string& path);

  // Word spans of the visible region of `text`.
  absl::StatusOr<std::vector<TextSpan>> VisibleWords(
      std::string_view text) const;

 private:
  std::size_t max_words_ = kDefaultTokens;
  bool use_sidecar_ = false;
  absl::flat_hash_map<std::string, std::size_t> boundaries_;
};

// Content word types over the visible region of every section text.
absl::StatusOr<WordSet> TitleWords(const TitleDataset& dataset,
                                   const TitleTruncation& truncation,
                                   const WordSet& stopwords);

// Type-level share of L2 content words that also occur in L1.
absl::StatusOr<OverlapReport> TitleWordOverlap(
    const TitleDataset& l1_train, const TitleDataset& l2_test,
    const TitleTruncation& truncation, const WordSet& stopwords);

WordPartition PartitionWords(const WordSet& l1_words,
                             const WordSet& l2_words);

WordPartition WordPartitionOf(const Corpus& l1_train, const Corpus& l2_test,
                              const WordSet& stopwords);

EntityKey EntityKeyOf(const EntityChunk& chunk);

absl::StatusOr<EntityPartition> EntityPartitionOf(const Corpus& l1_train,
                                                  const Corpus& l2_test);

}  // namespace xlp

#endif  // XLP_OVERLAP_H_
