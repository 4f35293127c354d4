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

#ifndef XLP_EMBEDDING_H_
#define XLP_EMBEDDING_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "xlp/corpus.h"

namespace xlp {

// Word -> dense vector table, loaded from word2vec-style text files.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  // Inserts or replaces. Rejects wrong length, non-finite and all-zero
  // vectors. Returns true when an existing word was replaced.
  absl::StatusOr<bool> Set(std::string_view word, std::span<const double> v);

  bool Contains(std::string_view word) const {
    return index_.contains(absl::string_view(word.data(), word.size()));
  }
  std::optional<std::span<const double>> Find(std::string_view word) const;

  const std::vector<std::string>& words() const { return words_; }

 private:
  std::size_t dim_;
  std::vector<std::string> words_;
  std::vector<double> values_;
  absl::flat_hash_map<std::string, std::size_t> index_;
};

struct LoadTableResult {
  EmbeddingTable table;
  std::vector<std::string> warnings;
};

// Header "<count> <dim>" then "<word> <f1> ... <fdim>" per line.
absl::StatusOr<LoadTableResult> ParseEmbeddingTable(std::string_view text);
absl::StatusOr<LoadTableResult> LoadEmbeddingTable(const std::string& path);
std::string SerializeEmbeddingTable(const EmbeddingTable& table);

// a.b / (|a||b|). Fails on length mismatch or a zero-norm input.
absl::StatusOr<double> Cosine(std::span<const double> a,
                              std::span<const double> b);

struct SimilarityResult {
  std::string word;
  double similarity = 0.0;

  friend bool operator==(const SimilarityResult&,
                         const SimilarityResult&) = default;
};

// Error payload key set on NearestUnique failures; value is "missing_vector"
// or "no_candidates" so callers can count skips without string matching.
inline constexpr std::string_view kNearestFailureKey = "xlp.nearest";

bool IsMissingVector(const absl::Status& status);
bool IsNoCandidates(const absl::Status& status);

// Candidate with the highest cosine to `word`, ignoring candidates absent
// from the table and `word` itself. Ties go to the lexicographically
// smallest candidate. Linear scan; this is the reference path.
absl::StatusOr<SimilarityResult> NearestUnique(std::string_view word,
                                               const WordSet& candidates,
                                               const EmbeddingTable& table);

// Pre-normalized candidate matrix for repeated queries against one
// candidate set. Returns the same word as NearestUnique.
class CandidateIndex {
 public:
  CandidateIndex(const WordSet& candidates, const EmbeddingTable& table);

  std::size_t size() const { return words_.size(); }

  absl::StatusOr<SimilarityResult> Nearest(std::string_view word) const;

 private:
  const EmbeddingTable* table_;
  std::vector<std::string> words_;  // sorted
  std::vector<double> unit_rows_;
};

}  // namespace xlp

#endif  // XLP_EMBEDDING_H_
