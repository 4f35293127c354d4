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

#ifndef XLP_TOOLS_CLI_COMMON_H_
#define XLP_TOOLS_CLI_COMMON_H_

#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "xlp/corpus.h"
#include "xlp/embedding.h"
#include "xlp/lexicon.h"
#include "xlp/overlap.h"
#include "xlp/perturb.h"
#include "xlp/score.h"
#include "xlp/title_task.h"

namespace xlp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Loads each input at most once and remembers its digest. NER corpora are
// BIO-repaired on load with the repair count reported to `log`.
class Resources {
 public:
  Resources(bool strip_language_prefix, std::ostream& log)
      : strip_language_prefix_(strip_language_prefix), log_(log) {}

  absl::StatusOr<const Corpus*> Ner(const std::string& path,
                                    const std::string& language);
  absl::StatusOr<const TitleDataset*> Titles(const std::string& path,
                                             const std::string& language);
  absl::StatusOr<const Lexicon*> Lex(const std::string& path);
  absl::StatusOr<const EmbeddingTable*> Embeddings(const std::string& path);
  // Empty path gives an empty set.
  absl::StatusOr<const WordSet*> Stopwords(const std::string& path);
  // Empty path gives the default 128-word truncation.
  absl::StatusOr<const TitleTruncation*> Truncation(const std::string& path);

  absl::StatusOr<ManifestInput> Input(const std::string& role,
                                      const std::string& path);

 private:
  bool strip_language_prefix_;
  std::ostream& log_;
  std::map<std::string, std::unique_ptr<Corpus>> ner_;
  std::map<std::string, std::unique_ptr<TitleDataset>> titles_;
  std::map<std::string, std::unique_ptr<Lexicon>> lexicons_;
  std::map<std::string, std::unique_ptr<EmbeddingTable>> embeddings_;
  std::map<std::string, std::unique_ptr<WordSet>> stopwords_;
  std::map<std::string, std::unique_ptr<TitleTruncation>> truncations_;
  std::map<std::string, std::string> digests_;
};

struct PerturbRequest {
  Task task = Task::kNer;
  Rule rule = Rule::kP1;
  SubstitutionMode mode = SubstitutionMode::kCosine;
  std::uint64_t seed = 0;
  std::string l2_test;
  std::string l1_train;
  std::string lexicon;
  std::string embeddings;
  std::string stopwords;
  std::string tokens;
  std::string l1_language;
  std::string l2_language;
  bool redraw_per_occurrence = false;
  unsigned threads = 1;
};

struct PerturbOutput {
  std::string text;
  PerturbationManifest manifest;
};

// InvalidArgument naming the missing flag when the request lacks an input
// its rule needs.
absl::Status CheckPerturbRequest(const PerturbRequest& request);

absl::StatusOr<PerturbOutput> RunPerturbation(const PerturbRequest& request,
                                              Resources& resources);

// Fails if `output` names the same file as any of `inputs`.
absl::Status CheckNotAnInput(const std::string& output,
                             const std::vector<std::string>& inputs);

// Filename up to the first dot: "data/br.test.conll" -> "br".
std::string LanguageFromPath(const std::string& path);

}  // namespace xlp::cli

#endif  // XLP_TOOLS_CLI_COMMON_H_
