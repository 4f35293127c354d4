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

#ifndef XLP_PERTURB_H_
#define XLP_PERTURB_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "xlp/corpus.h"
#include "xlp/embedding.h"
#include "xlp/lexicon.h"
#include "xlp/overlap.h"
#include "xlp/rng.h"
#include "xlp/title_task.h"

namespace xlp {

enum class Rule { kP1, kP2, kP3, kP4, kP5 };

std::string_view RuleName(Rule rule);  // "p1".."p5"
absl::StatusOr<Rule> ParseRule(std::string_view name);

enum class Mechanism { kRandomLexicon, kEntitySwap, kCosine, kRandomWord };

std::string_view MechanismName(Mechanism mechanism);

enum class SubstitutionMode { kCosine, kRandom };

std::string_view SubstitutionModeName(SubstitutionMode mode);
absl::StatusOr<SubstitutionMode> ParseSubstitutionMode(std::string_view name);

struct PerturbationRecord {
  Rule rule = Rule::kP1;
  // Sentence index for NER; example index for titles.
  std::size_t sentence_index = 0;
  // Token range in the input sentence, or a byte range in the input section
  // text for titles.
  TokenSpan span;
  std::string original_surface;
  std::string replacement_surface;
  Mechanism mechanism = Mechanism::kRandomLexicon;
  // A lexicon draw that reproduced the original text.
  bool no_op = false;
};

struct SkipCounts {
  std::size_t no_unique_entity = 0;
  std::size_t missing_vector = 0;
  std::size_t no_candidates = 0;

  std::size_t total() const {
    return no_unique_entity + missing_vector + no_candidates;
  }
};

struct ManifestInput {
  std::string role;
  std::string path;
  std::string sha256;
};

struct PerturbationManifest {
  std::uint64_t seed = 0;
  Rule rule = Rule::kP1;
  SubstitutionMode mode = SubstitutionMode::kCosine;
  std::vector<ManifestInput> inputs;
  std::vector<PerturbationRecord> records;
  SkipCounts skipped;
  // P1 spans that grew because a multi-word name was drawn.
  std::size_t extended_spans = 0;
  std::string output_sha256;

  // Appends another manifest's records and skip counts (used by P5).
  void Merge(const PerturbationManifest& other);
};

// JSON text with stable key order.
std::string ManifestToJson(const PerturbationManifest& manifest);

struct PerturbResult {
  Corpus corpus;
  PerturbationManifest manifest;
};

struct TitlePerturbResult {
  TitleDataset dataset;
  PerturbationManifest manifest;
};

struct EntitySwapOptions {
  // Draw a fresh replacement for every occurrence instead of one per
  // distinct common entity.
  bool redraw_per_occurrence = false;
};

struct ContextSwapOptions {
  SubstitutionMode mode = SubstitutionMode::kCosine;
  // Required in cosine mode; ignored in random mode.
  const EmbeddingTable* table = nullptr;
  WordSet stopwords;
  // Worker threads for the cosine search; 0 picks hardware concurrency.
  unsigned threads = 1;
};

// P1: first token of every PER chunk becomes a given name from `names`.
absl::StatusOr<PerturbResult> PerturbGivenNames(const Corpus& corpus,
                                                const Lexicon& names,
                                                const Rng& rng);

// P2: every LOC chunk becomes a placename from `places`.
absl::StatusOr<PerturbResult> PerturbPlaces(const Corpus& corpus,
                                            const Lexicon& places,
                                            const Rng& rng);

// P3: L2-test entities that also occur in L1-train are replaced by L2-only
// entities of the same label.
absl::StatusOr<PerturbResult> PerturbSharedEntities(
    const Corpus& l2_test, const Corpus& l1_train, const Rng& rng,
    const EntitySwapOptions& options = {});

// Common word -> substitute. Built in sorted order of the common words.
struct SubstitutionMap {
  absl::flat_hash_map<std::string, std::string> substitutes;
  SkipCounts skipped;
};

absl::StatusOr<SubstitutionMap> BuildSubstitutions(
    const WordPartition& partition, const ContextSwapOptions& options,
    const Rng& rng);

// P4: Outside-tagged tokens whose lowercased text is a common word are
// rewritten with their substitute; entity tokens are never touched.
absl::StatusOr<PerturbResult> PerturbContextWords(
    const Corpus& l2_test, const Corpus& l1_train,
    const ContextSwapOptions& options, const Rng& rng);

// P5: P3 under rng.Fork("p3"), then P4 under rng.Fork("p4").
absl::StatusOr<PerturbResult> PerturbEntitiesAndContext(
    const Corpus& l2_test, const Corpus& l1_train,
    const ContextSwapOptions& options, const Rng& rng,
    const EntitySwapOptions& entity_options = {});

// P4 on section texts of a title dataset. Word sets come from the visible
// region of each text; substitution applies to every occurrence in the
// text. Candidate titles are left alone.
absl::StatusOr<TitlePerturbResult> PerturbTitleContext(
    const TitleDataset& dataset, const TitleDataset& l1_train,
    const TitleTruncation& truncation, const ContextSwapOptions& options,
    const Rng& rng);

}  // namespace xlp

#endif  // XLP_PERTURB_H_
