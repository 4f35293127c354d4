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

#include "xlp/embedding.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "absl/strings/cord.h"
#include "xlp/file_util.h"
#include "xlp/status_macros.h"
#include "str_util.h"

namespace xlp {
namespace {

absl::Status NearestFailure(absl::Status status, std::string_view reason) {
  status.SetPayload(ToAbsl(kNearestFailureKey), absl::Cord(ToAbsl(reason)));
  return status;
}

bool HasNearestPayload(const absl::Status& status, std::string_view reason) {
  auto payload = status.GetPayload(ToAbsl(kNearestFailureKey));
  return payload.has_value() && *payload == ToAbsl(reason);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double Norm(std::span<const double> v) { return std::sqrt(Dot(v, v)); }

absl::StatusOr<std::size_t> ParseCount(std::string_view field,
                                       std::string_view what) {
  std::size_t value = 0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    return absl::InvalidArgumentError(
        StrCat("line 1: bad ", what, " '", field, "'"));
  }
  return value;
}

}  // namespace

absl::StatusOr<bool> EmbeddingTable::Set(std::string_view word,
                                         std::span<const double> v) {
  if (v.size() != dim_) {
    return absl::InvalidArgumentError(StrCat(
        "vector for '", word, "' has ", v.size(), " components, want ", dim_));
  }
  bool nonzero = false;
  for (double x : v) {
    if (!std::isfinite(x)) {
      return absl::InvalidArgumentError(
          StrCat("non-finite component in vector for '", word, "'"));
    }
    nonzero = nonzero || x != 0.0;
  }
  if (!nonzero) {
    return absl::InvalidArgumentError(
        StrCat("zero vector for '", word, "'"));
  }
  if (auto it = index_.find(ToAbsl(word)); it != index_.end()) {
    std::copy(v.begin(), v.end(), values_.begin() + it->second * dim_);
    return true;
  }
  index_.emplace(std::string(word), words_.size());
  words_.emplace_back(word);
  values_.insert(values_.end(), v.begin(), v.end());
  return false;
}

std::optional<std::span<const double>> EmbeddingTable::Find(
    std::string_view word) const {
  auto it = index_.find(ToAbsl(word));
  if (it == index_.end()) return std::nullopt;
  return std::span<const double>(values_.data() + it->second * dim_, dim_);
}

absl::StatusOr<LoadTableResult> ParseEmbeddingTable(std::string_view text) {
  std::vector<std::string_view> lines = StrSplit(text, '\n');
  while (!lines.empty() && StripSuffix(lines.back(), "\r").empty()) {
    lines.pop_back();
  }
  if (lines.empty()) return absl::InvalidArgumentError("empty embedding file");
  std::vector<std::string_view> header =
      SplitAnySkipEmpty(StripSuffix(lines[0], "\r"), " ");
  if (header.size() != 2) {
    return absl::InvalidArgumentError("line 1: expected '<count> <dim>'");
  }
  XLP_ASSIGN_OR_RETURN(std::size_t count, ParseCount(header[0], "count"));
  XLP_ASSIGN_OR_RETURN(std::size_t dim, ParseCount(header[1], "dim"));
  if (dim == 0) return absl::InvalidArgumentError("line 1: dim must be > 0");
  if (lines.size() - 1 != count) {
    return absl::InvalidArgumentError(
        StrCat("header declares ", count, " entries but file has ",
                     lines.size() - 1));
  }

  LoadTableResult result{EmbeddingTable(dim), {}};
  std::vector<double> vec(dim);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::vector<std::string_view> fields = SplitAnySkipEmpty(
        StripSuffix(lines[i], "\r"), " \t");
    if (fields.size() != dim + 1) {
      return absl::InvalidArgumentError(
          StrCat("line ", line_no, ": expected word and ", dim,
                       " values, got ", fields.size(), " fields"));
    }
    for (std::size_t d = 0; d < dim; ++d) {
      std::string_view f = fields[d + 1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), vec[d]);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        return absl::InvalidArgumentError(
            StrCat("line ", line_no, ": bad number '", f, "'"));
      }
    }
    auto replaced = result.table.Set(fields[0], vec);
    if (!replaced.ok()) {
      return absl::InvalidArgumentError(
          StrCat("line ", line_no, ": ", replaced.status().message()));
    }
    if (*replaced) {
      result.warnings.push_back(StrCat(
          "line ", line_no, ": duplicate word '", fields[0], "', last wins"));
    }
  }
  return result;
}

absl::StatusOr<LoadTableResult> LoadEmbeddingTable(const std::string& path) {
  XLP_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  auto result = ParseEmbeddingTable(text);
  if (!result.ok()) {
    return absl::Status(result.status().code(),
                        StrCat(path, ": ", result.status().message()));
  }
  return result;
}

std::string SerializeEmbeddingTable(const EmbeddingTable& table) {
  std::string out = StrCat(table.size(), " ", table.dim(), "\n");
  char buf[64];
  for (const std::string& word : table.words()) {
    out += word;
    const std::span<const double> values = *table.Find(word);
    for (double x : values) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
      out.push_back(' ');
      out.append(buf, ptr);
    }
    out.push_back('\n');
  }
  return out;
}

absl::StatusOr<double> Cosine(std::span<const double> a,
                              std::span<const double> b) {
  if (a.size() != b.size()) {
    return absl::InvalidArgumentError(StrCat(
        "cosine of vectors with lengths ", a.size(), " and ", b.size()));
  }
  const double na = Norm(a);
  const double nb = Norm(b);
  if (na == 0.0 || nb == 0.0) {
    return absl::InvalidArgumentError("cosine of a zero-norm vector");
  }
  return Dot(a, b) / (na * nb);
}

bool IsMissingVector(const absl::Status& status) {
  return HasNearestPayload(status, "missing_vector");
}

bool IsNoCandidates(const absl::Status& status) {
  return HasNearestPayload(status, "no_candidates");
}

absl::StatusOr<SimilarityResult> NearestUnique(std::string_view word,
                                               const WordSet& candidates,
                                               const EmbeddingTable& table) {
  auto query = table.Find(word);
  if (!query) {
    return NearestFailure(
        absl::NotFoundError(StrCat("no vector for '", word, "'")),
        "missing_vector");
  }
  std::optional<SimilarityResult> best;
  for (const std::string& candidate : candidates) {
    if (candidate == word) continue;
    auto v = table.Find(candidate);
    if (!v) continue;
    XLP_ASSIGN_OR_RETURN(double sim, Cosine(*query, *v));
    if (!best || sim > best->similarity ||
        (sim == best->similarity && candidate < best->word)) {
      best = SimilarityResult{candidate, sim};
    }
  }
  if (!best) {
    return NearestFailure(
        absl::NotFoundError(
            StrCat("no candidate with a vector for '", word, "'")),
        "no_candidates");
  }
  return *best;
}

CandidateIndex::CandidateIndex(const WordSet& candidates,
                               const EmbeddingTable& table)
    : table_(&table) {
  for (const std::string& c : candidates) {
    if (table.Contains(c)) words_.push_back(c);
  }
  std::sort(words_.begin(), words_.end());
  unit_rows_.reserve(words_.size() * table.dim());
  for (const std::string& c : words_) {
    auto v = *table.Find(c);
    const double n = Norm(v);
    for (double x : v) unit_rows_.push_back(x / n);
  }
}

absl::StatusOr<SimilarityResult> CandidateIndex::Nearest(
    std::string_view word) const {
  auto query = table_->Find(word);
  if (!query) {
    return NearestFailure(
        absl::NotFoundError(StrCat("no vector for '", word, "'")),
        "missing_vector");
  }
  const std::size_t dim = table_->dim();
  const double qn = Norm(*query);
  std::vector<double> unit_query(dim);
  for (std::size_t d = 0; d < dim; ++d) unit_query[d] = (*query)[d] / qn;

  std::size_t best = words_.size();
  double best_sim = 0.0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] == word) continue;
    const double sim =
        Dot(unit_query, std::span<const double>(&unit_rows_[i * dim], dim));
    // Rows are sorted, so strict > keeps the smallest word on ties.
    if (best == words_.size() || sim > best_sim) {
      best = i;
      best_sim = sim;
    }
  }
  if (best == words_.size()) {
    return NearestFailure(
        absl::NotFoundError(
            StrCat("no candidate with a vector for '", word, "'")),
        "no_candidates");
  }
  return SimilarityResult{words_[best], best_sim};
}

}  // namespace xlp
