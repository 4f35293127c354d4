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

#include "cli_common.h"

#include <filesystem>
#include <system_error>
#include <utility>

#include "fmt/format.h"
#include "xlp/file_util.h"
#include "xlp/rng.h"
#include "xlp/status_macros.h"

namespace xlp::cli {
namespace {

template <typename T, typename Loader>
absl::StatusOr<const T*> Memoized(
    std::map<std::string, std::unique_ptr<T>>& cache, const std::string& key,
    Loader load) {
  if (auto it = cache.find(key); it != cache.end()) return it->second.get();
  XLP_ASSIGN_OR_RETURN(T value, load());
  auto [it, inserted] =
      cache.emplace(key, std::make_unique<T>(std::move(value)));
  return it->second.get();
}

}  // namespace

absl::StatusOr<const Corpus*> Resources::Ner(const std::string& path,
                                             const std::string& language) {
  return Memoized(ner_, path, [&]() -> absl::StatusOr<Corpus> {
    ParseOptions options;
    options.strip_language_prefix = strip_language_prefix_;
    XLP_ASSIGN_OR_RETURN(Corpus corpus, LoadConll(path, language, options));
    if (std::size_t repaired = RepairCorpus(corpus); repaired > 0) {
      log_ << "warning: " << path << ": repaired " << repaired
           << " Inside tag(s) without a preceding Begin\n";
    }
    return corpus;
  });
}

absl::StatusOr<const TitleDataset*> Resources::Titles(
    const std::string& path, const std::string& language) {
  return Memoized(titles_, path, [&]() {
    return LoadTitleDataset(path, language);
  });
}

absl::StatusOr<const Lexicon*> Resources::Lex(const std::string& path) {
  return Memoized(lexicons_, path, [&]() { return LoadLexicon(path); });
}

absl::StatusOr<const EmbeddingTable*> Resources::Embeddings(
    const std::string& path) {
  return Memoized(
      embeddings_, path, [&]() -> absl::StatusOr<EmbeddingTable> {
        XLP_ASSIGN_OR_RETURN(LoadTableResult loaded, LoadEmbeddingTable(path));
        for (const std::string& w : loaded.warnings) {
          log_ << "warning: " << path << ": " << w << "\n";
        }
        return std::move(loaded.table);
      });
}

absl::StatusOr<const WordSet*> Resources::Stopwords(const std::string& path) {
  return Memoized(stopwords_, path, [&]() -> absl::StatusOr<WordSet> {
    if (path.empty()) return WordSet();
    return LoadStopwords(path);
  });
}

absl::StatusOr<const TitleTruncation*> Resources::Truncation(
    const std::string& path) {
  return Memoized(
      truncations_, path, [&]() -> absl::StatusOr<TitleTruncation> {
        if (path.empty()) return TitleTruncation::Words();
        return TitleTruncation::LoadSidecar(path);
      });
}

absl::StatusOr<ManifestInput> Resources::Input(const std::string& role,
                                               const std::string& path) {
  auto it = digests_.find(path);
  if (it == digests_.end()) {
    XLP_ASSIGN_OR_RETURN(std::string contents, ReadFile(path));
    it = digests_.emplace(path, Sha256Hex(contents)).first;
  }
  return ManifestInput{role, path, it->second};
}

absl::Status CheckPerturbRequest(const PerturbRequest& r) {
  const std::string rule(RuleName(r.rule));
  if (r.l2_test.empty()) {
    return absl::InvalidArgumentError("--l2-test is required");
  }
  if (r.task == Task::kTitle && r.rule != Rule::kP4) {
    return absl::InvalidArgumentError(fmt::format(
        "rule {} is not defined for the title task; only p4 is", rule));
  }
  const bool needs_lexicon = r.rule == Rule::kP1 || r.rule == Rule::kP2;
  if (needs_lexicon && r.lexicon.empty()) {
    return absl::InvalidArgumentError(
        fmt::format("rule {} needs --lexicon", rule));
  }
  if (!needs_lexicon && r.l1_train.empty()) {
    return absl::InvalidArgumentError(
        fmt::format("rule {} needs --l1-train", rule));
  }
  const bool uses_vectors = (r.rule == Rule::kP4 || r.rule == Rule::kP5) &&
                            r.mode == SubstitutionMode::kCosine;
  if (uses_vectors && r.embeddings.empty()) {
    return absl::InvalidArgumentError(
        fmt::format("rule {} in cosine mode needs --embeddings", rule));
  }
  return absl::OkStatus();
}

absl::StatusOr<PerturbOutput> RunPerturbation(const PerturbRequest& r,
                                              Resources& resources) {
  XLP_RETURN_IF_ERROR(CheckPerturbRequest(r));
  const Rng rng(r.seed);
  PerturbOutput output;
  std::vector<ManifestInput> inputs;
  auto add_input = [&](const char* role,
                       const std::string& path) -> absl::Status {
    if (path.empty()) return absl::OkStatus();
    XLP_ASSIGN_OR_RETURN(ManifestInput in, resources.Input(role, path));
    inputs.push_back(std::move(in));
    return absl::OkStatus();
  };

  ContextSwapOptions context;
  context.mode = r.mode;
  context.threads = r.threads;
  const bool context_rule = r.rule == Rule::kP4 || r.rule == Rule::kP5;
  if (context_rule) {
    XLP_ASSIGN_OR_RETURN(const WordSet* stopwords,
                         resources.Stopwords(r.stopwords));
    context.stopwords = *stopwords;
    if (r.mode == SubstitutionMode::kCosine) {
      XLP_ASSIGN_OR_RETURN(context.table, resources.Embeddings(r.embeddings));
    }
  }

  if (r.task == Task::kTitle) {
    XLP_ASSIGN_OR_RETURN(const TitleDataset* test,
                         resources.Titles(r.l2_test, r.l2_language));
    XLP_ASSIGN_OR_RETURN(const TitleDataset* train,
                         resources.Titles(r.l1_train, r.l1_language));
    XLP_ASSIGN_OR_RETURN(const TitleTruncation* truncation,
                         resources.Truncation(r.tokens));
    XLP_ASSIGN_OR_RETURN(
        TitlePerturbResult result,
        PerturbTitleContext(*test, *train, *truncation, context, rng));
    output.text = SerializeTitleDataset(result.dataset);
    output.manifest = std::move(result.manifest);
  } else {
    XLP_ASSIGN_OR_RETURN(const Corpus* test,
                         resources.Ner(r.l2_test, r.l2_language));
    const Corpus* train = nullptr;
    if (!r.l1_train.empty()) {
      XLP_ASSIGN_OR_RETURN(train, resources.Ner(r.l1_train, r.l1_language));
    }
    EntitySwapOptions entity;
    entity.redraw_per_occurrence = r.redraw_per_occurrence;
    absl::StatusOr<PerturbResult> result;
    switch (r.rule) {
      case Rule::kP1:
      case Rule::kP2: {
        XLP_ASSIGN_OR_RETURN(const Lexicon* lexicon, resources.Lex(r.lexicon));
        const LexiconKind want = r.rule == Rule::kP1 ? LexiconKind::kGivenNames
                                                     : LexiconKind::kPlaces;
        if (lexicon->kind() != want) {
          return absl::InvalidArgumentError(fmt::format(
              "{}: rule {} needs a {} lexicon, got {}", r.lexicon,
              RuleName(r.rule), LexiconKindName(want),
              LexiconKindName(lexicon->kind())));
        }
        result = r.rule == Rule::kP1 ? PerturbGivenNames(*test, *lexicon, rng)
                                     : PerturbPlaces(*test, *lexicon, rng);
        break;
      }
      case Rule::kP3:
        result = PerturbSharedEntities(*test, *train, rng, entity);
        break;
      case Rule::kP4:
        result = PerturbContextWords(*test, *train, context, rng);
        break;
      case Rule::kP5:
        result = PerturbEntitiesAndContext(*test, *train, context, rng, entity);
        break;
    }
    if (!result.ok()) return result.status();
    output.text = SerializeConll(result->corpus);
    output.manifest = std::move(result->manifest);
  }

  XLP_RETURN_IF_ERROR(add_input("l2_test", r.l2_test));
  XLP_RETURN_IF_ERROR(add_input("l1_train", r.l1_train));
  XLP_RETURN_IF_ERROR(add_input("lexicon", r.lexicon));
  if (context_rule) {
    if (r.mode == SubstitutionMode::kCosine) {
      XLP_RETURN_IF_ERROR(add_input("embeddings", r.embeddings));
    }
    XLP_RETURN_IF_ERROR(add_input("stopwords", r.stopwords));
  }
  if (r.task == Task::kTitle) {
    XLP_RETURN_IF_ERROR(add_input("tokens", r.tokens));
  }
  output.manifest.inputs = std::move(inputs);
  output.manifest.output_sha256 = Sha256Hex(output.text);
  return output;
}

absl::Status CheckNotAnInput(const std::string& output,
                             const std::vector<std::string>& inputs) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const fs::path out = fs::weakly_canonical(output, ec);
  if (ec) return absl::OkStatus();
  for (const std::string& in : inputs) {
    if (in.empty()) continue;
    if (fs::weakly_canonical(in, ec) == out && !ec) {
      return absl::InvalidArgumentError(
          fmt::format("output {} would overwrite input {}", output, in));
    }
  }
  return absl::OkStatus();
}

std::string LanguageFromPath(const std::string& path) {
  std::string name = std::filesystem::path(path).filename().string();
  if (std::size_t dot = name.find('.'); dot != std::string::npos && dot > 0) {
    name.resize(dot);
  }
  return name;
}

}  // namespace xlp::cli
