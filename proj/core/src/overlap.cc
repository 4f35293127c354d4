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

#include "xlp/overlap.h"

#include <sstream>

#include "absl/container/flat_hash_set.h"
#include "xlp/file_util.h"
#include "xlp/status_macros.h"
#include "str_util.h"

namespace xlp {

absl::StatusOr<OverlapReport> NerWordOverlap(const Corpus& l1_train,
                                             const Corpus& l2_test,
                                             NerDenominator denominator) {
  absl::flat_hash_set<std::pair<std::string, std::string>> l1_pairs;
  for (const Sentence& s : l1_train.sentences) {
    for (const Token& t : s.tokens) {
      if (t.tag.is_outside()) continue;
      l1_pairs.emplace(ToLower(t.text), t.tag.ToString());
    }
  }
  OverlapReport report;
  std::size_t entity_tokens = 0;
  for (const Sentence& s : l2_test.sentences) {
    for (const Token& t : s.tokens) {
      if (t.tag.is_outside()) continue;
      ++entity_tokens;
      if (l1_pairs.contains(std::make_pair(ToLower(t.text), t.tag.ToString()))) {
        ++report.shared_count;
      }
    }
  }
  if (entity_tokens == 0) {
    return absl::FailedPreconditionError(
        "L2 test corpus has no entity tokens; overlap is undefined");
  }
  report.total_count = denominator == NerDenominator::kEntityTokens
                           ? entity_tokens
                           : l2_test.token_count();
  return report;
}

TitleTruncation TitleTruncation::Words(std::size_t max_words) {
  TitleTruncation t;
  t.max_words_ = max_words;
  return t;
}

absl::StatusOr<TitleTruncation> TitleTruncation::FromSidecar(
    std::string_view text) {
  TitleTruncation t;
  t.use_sidecar_ = true;
  std::size_t line_no = 0;
  for (std::string_view line : StrSplit(text, '\n')) {
    ++line_no;
    line = StripSuffix(line, "\r");
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> fields = StrSplit(line, '\t');
    std::size_t count = 0;
    std::size_t boundary = 0;
    if (fields.size() != 3 || fields[0].size() != 64 ||
        !ParseNumber(fields[1], &count) ||
        !ParseNumber(fields[2], &boundary)) {
      return absl::InvalidArgumentError(StrCat(
          "sidecar line ", line_no,
          ": expected '<sha256>\\t<token count>\\t<boundary>'"));
    }
    t.boundaries_[std::string(fields[0])] = boundary;
  }
  return t;
}

absl::StatusOr<TitleTruncation> TitleTruncation::LoadSidecar(
    const std::string& path) {
  XLP_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return FromSidecar(text);
}

absl::StatusOr<std::vector<TextSpan>> TitleTruncation::VisibleWords(
    std::string_view text) const {
  if (use_sidecar_) {
    auto it = boundaries_.find(Sha256Hex(text));
    if (it == boundaries_.end()) {
      return absl::NotFoundError(StrCat(
          "token sidecar has no entry for section text starting '",
          TruncateCodePoints(text, 40), "'"));
    }
    return SegmentWords(TruncateCodePoints(text, it->second));
  }
  std::vector<TextSpan> words = SegmentWords(text);
  if (words.size() > max_words_) words.resize(max_words_);
  return words;
}

absl::StatusOr<WordSet> TitleWords(const TitleDataset& dataset,
                                   const TitleTruncation& truncation,
                                   const WordSet& stopwords) {
  WordSet words;
  for (const TitleExample& ex : dataset.examples) {
    XLP_ASSIGN_OR_RETURN(std::vector<TextSpan> spans,
                         truncation.VisibleWords(ex.text));
    for (const TextSpan& span : spans) {
      std::string word = ContentWordForm(
          std::string_view(ex.text).substr(span.begin, span.end - span.begin),
          stopwords);
      if (!word.empty()) words.insert(std::move(word));
    }
  }
  return words;
}

absl::StatusOr<OverlapReport> TitleWordOverlap(
    const TitleDataset& l1_train, const TitleDataset& l2_test,
    const TitleTruncation& truncation, const WordSet& stopwords) {
  if (l1_train.examples.empty() || l2_test.examples.empty()) {
    return absl::FailedPreconditionError("title datasets must be nonempty");
  }
  XLP_ASSIGN_OR_RETURN(WordSet l1, TitleWords(l1_train, truncation, stopwords));
  XLP_ASSIGN_OR_RETURN(WordSet l2, TitleWords(l2_test, truncation, stopwords));
  if (l2.empty()) {
    return absl::FailedPreconditionError(
        "L2 test has no content words after filtering");
  }
  OverlapReport report;
  report.total_count = l2.size();
  for (const std::string& w : l2) {
    if (l1.contains(w)) ++report.shared_count;
  }
  return report;
}

WordPartition PartitionWords(const WordSet& l1_words,
                             const WordSet& l2_words) {
  WordPartition partition;
  for (const std::string& w : l2_words) {
    if (l1_words.contains(w)) {
      partition.common.insert(w);
    } else {
      partition.unique.insert(w);
    }
  }
  return partition;
}

WordPartition WordPartitionOf(const Corpus& l1_train, const Corpus& l2_test,
                              const WordSet& stopwords) {
  return PartitionWords(ContentWords(l1_train, stopwords),
                        ContentWords(l2_test, stopwords));
}

EntityKey EntityKeyOf(const EntityChunk& chunk) {
  std::vector<std::string> lowered;
  lowered.reserve(chunk.surface.size());
  for (const std::string& w : chunk.surface) lowered.push_back(ToLower(w));
  return {chunk.label, StrJoin(lowered, " ")};
}

absl::StatusOr<EntityPartition> EntityPartitionOf(const Corpus& l1_train,
                                                  const Corpus& l2_test) {
  XLP_ASSIGN_OR_RETURN(auto l1_chunks, ExtractChunks(l1_train));
  XLP_ASSIGN_OR_RETURN(auto l2_chunks, ExtractChunks(l2_test));
  std::set<EntityKey> l1_keys;
  for (const EntityChunk& c : l1_chunks) l1_keys.insert(EntityKeyOf(c));
  EntityPartition partition;
  for (const EntityChunk& c : l2_chunks) {
    EntityKey key = EntityKeyOf(c);
    if (l1_keys.contains(key)) {
      partition.common_entities.insert(std::move(key));
    } else {
      partition.unique_by_label[key.first].insert(std::move(key.second));
    }
  }
  return partition;
}

}  // namespace xlp
