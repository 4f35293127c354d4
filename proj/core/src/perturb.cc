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

#include "xlp/perturb.h"

#include <algorithm>
#include <map>
#include <optional>
#include <thread>

#include "json.hpp"
#include "xlp/status_macros.h"
#include "xlp/text.h"
#include "str_util.h"

namespace xlp {
namespace {

constexpr std::string_view kPersonLabel = "PER";
constexpr std::string_view kLocationLabel = "LOC";

std::string JoinSurface(const std::vector<Token>& tokens, TokenSpan span) {
  std::vector<std::string_view> words;
  for (std::size_t i = span.begin; i < span.end; ++i) {
    words.push_back(tokens[i].text);
  }
  return StrJoin(words, " ");
}

void AppendEntity(std::vector<Token>& out,
                  const std::vector<std::string>& words,
                  const std::string& label) {
  for (std::size_t i = 0; i < words.size(); ++i) {
    out.push_back(Token{words[i], i == 0 ? BioTag::Begin(label)
                                         : BioTag::Inside(label)});
  }
}

PerturbationManifest NewManifest(Rule rule, const Rng& rng) {
  PerturbationManifest m;
  m.rule = rule;
  m.seed = rng.seed();
  return m;
}

// Shared driver for P1/P2: every chunk with `label` gets a lexicon draw.
absl::StatusOr<PerturbResult> PerturbWithLexicon(const Corpus& corpus,
                                                 const Lexicon& lexicon,
                                                 const Rng& rng, Rule rule,
                                                 std::string_view label,
                                                 bool whole_span) {
  if (lexicon.empty()) {
    return absl::FailedPreconditionError(
        StrCat(RuleName(rule), ": empty ", LexiconKindName(lexicon.kind()),
                     " lexicon"));
  }
  PerturbResult result{Corpus{corpus.language, {}}, NewManifest(rule, rng)};
  result.corpus.sentences.reserve(corpus.sentences.size());
  const Rng streams = rng.Fork(RuleName(rule));
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    const std::vector<Token>& tokens = corpus.sentences[s].tokens;
    XLP_ASSIGN_OR_RETURN(auto chunks, ExtractChunks(corpus.sentences[s], s));
    Rng sentence_rng = streams.Fork(s);
    Sentence out;
    out.tokens.reserve(tokens.size());
    std::size_t next = 0;
    for (const EntityChunk& chunk : chunks) {
      if (chunk.label != label) continue;
      for (; next < chunk.span.begin; ++next) out.tokens.push_back(tokens[next]);
      XLP_ASSIGN_OR_RETURN(std::string draw, lexicon.Sample(sentence_rng));
      std::vector<std::string> words = SplitWhitespace(draw);
      TokenSpan replaced = chunk.span;
      if (!whole_span) replaced.end = replaced.begin + 1;
      const std::string original = JoinSurface(tokens, replaced);
      AppendEntity(out.tokens, words, chunk.label);
      next = replaced.end;
      if (!whole_span && words.size() > 1) ++result.manifest.extended_spans;
      result.manifest.records.push_back(
          {rule, s, replaced, original, StrJoin(words, " "),
           Mechanism::kRandomLexicon, original == StrJoin(words, " ")});
    }
    for (; next < tokens.size(); ++next) out.tokens.push_back(tokens[next]);
    result.corpus.sentences.push_back(std::move(out));
  }
  return result;
}

// Runs `fn(i)` for i in [0, n) on up to `threads` workers.
template <typename Fn>
void ParallelFor(std::size_t n, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([=, &fn] {
      for (std::size_t i = t; i < n; i += threads) fn(i);
    });
  }
  for (std::thread& w : workers) w.join();
}

Mechanism ContextMechanism(SubstitutionMode mode) {
  return mode == SubstitutionMode::kCosine ? Mechanism::kCosine
                                           : Mechanism::kRandomWord;
}

using json = nlohmann::ordered_json;

}  // namespace

std::string_view RuleName(Rule rule) {
  switch (rule) {
    case Rule::kP1:
      return "p1";
    case Rule::kP2:
      return "p2";
    case Rule::kP3:
      return "p3";
    case Rule::kP4:
      return "p4";
    case Rule::kP5:
      return "p5";
  }
  return "p1";
}

absl::StatusOr<Rule> ParseRule(std::string_view name) {
  for (Rule r : {Rule::kP1, Rule::kP2, Rule::kP3, Rule::kP4, Rule::kP5}) {
    if (RuleName(r) == name) return r;
  }
  return absl::InvalidArgumentError(StrCat("unknown rule '", name, "'"));
}

std::string_view MechanismName(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::kRandomLexicon:
      return "random_lexicon";
    case Mechanism::kEntitySwap:
      return "entity_swap";
    case Mechanism::kCosine:
      return "cosine";
    case Mechanism::kRandomWord:
      return "random_word";
  }
  return "random_lexicon";
}

std::string_view SubstitutionModeName(SubstitutionMode mode) {
  return mode == SubstitutionMode::kCosine ? "cosine" : "random";
}

absl::StatusOr<SubstitutionMode> ParseSubstitutionMode(std::string_view name) {
  if (name == "cosine") return SubstitutionMode::kCosine;
  if (name == "random") return SubstitutionMode::kRandom;
  return absl::InvalidArgumentError(StrCat("unknown mode '", name, "'"));
}

void PerturbationManifest::Merge(const PerturbationManifest& other) {
  records.insert(records.end(), other.records.begin(), other.records.end());
  skipped.no_unique_entity += other.skipped.no_unique_entity;
  skipped.missing_vector += other.skipped.missing_vector;
  skipped.no_candidates += other.skipped.no_candidates;
  extended_spans += other.extended_spans;
}

std::string ManifestToJson(const PerturbationManifest& m) {
  json doc;
  doc["seed"] = m.seed;
  doc["rule"] = RuleName(m.rule);
  doc["mode"] = SubstitutionModeName(m.mode);
  json inputs = json::array();
  for (const ManifestInput& in : m.inputs) {
    inputs.push_back({{"role", in.role}, {"path", in.path},
                      {"sha256", in.sha256}});
  }
  doc["inputs"] = std::move(inputs);
  doc["output_sha256"] = m.output_sha256;
  doc["skipped"] = {{"no_unique_entity", m.skipped.no_unique_entity},
                    {"missing_vector", m.skipped.missing_vector},
                    {"no_candidates", m.skipped.no_candidates}};
  doc["extended_spans"] = m.extended_spans;
  json records = json::array();
  for (const PerturbationRecord& r : m.records) {
    records.push_back({{"rule", RuleName(r.rule)},
                       {"sentence_index", r.sentence_index},
                       {"token_span", {r.span.begin, r.span.end}},
                       {"original", r.original_surface},
                       {"replacement", r.replacement_surface},
                       {"mechanism", MechanismName(r.mechanism)},
                       {"no_op", r.no_op}});
  }
  doc["records"] = std::move(records);
  return doc.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

absl::StatusOr<PerturbResult> PerturbGivenNames(const Corpus& corpus,
                                                const Lexicon& names,
                                                const Rng& rng) {
  return PerturbWithLexicon(corpus, names, rng, Rule::kP1, kPersonLabel,
                            /*whole_span=*/false);
}

absl::StatusOr<PerturbResult> PerturbPlaces(const Corpus& corpus,
                                            const Lexicon& places,
                                            const Rng& rng) {
  return PerturbWithLexicon(corpus, places, rng, Rule::kP2, kLocationLabel,
                            /*whole_span=*/true);
}

absl::StatusOr<PerturbResult> PerturbSharedEntities(
    const Corpus& l2_test, const Corpus& l1_train, const Rng& rng,
    const EntitySwapOptions& options) {
  XLP_ASSIGN_OR_RETURN(EntityPartition partition,
                       EntityPartitionOf(l1_train, l2_test));
  XLP_ASSIGN_OR_RETURN(auto l2_chunks, ExtractChunks(l2_test));

  // Original-case words of the first occurrence of each L2-only entity.
  std::map<EntityKey, std::vector<std::string>> representative;
  for (const EntityChunk& c : l2_chunks) {
    EntityKey key = EntityKeyOf(c);
    if (!partition.common_entities.contains(key)) {
      representative.try_emplace(std::move(key), c.surface);
    }
  }
  std::map<std::string, std::vector<const std::vector<std::string>*>> pools;
  for (const auto& [key, words] : representative) {
    pools[key.first].push_back(&words);
  }

  const Rng type_streams = rng.Fork("p3/type");
  const Rng occurrence_streams = rng.Fork("p3/occurrence");
  std::map<EntityKey, const std::vector<std::string>*> per_type;
  if (!options.redraw_per_occurrence) {
    for (const EntityKey& key : partition.common_entities) {
      auto pool = pools.find(key.first);
      if (pool == pools.end()) continue;
      Rng key_rng =
          type_streams.Fork(StrCat(key.first, "\x1f", key.second));
      per_type[key] = pool->second[key_rng.Uniform(pool->second.size())];
    }
  }

  PerturbResult result{Corpus{l2_test.language, {}},
                       NewManifest(Rule::kP3, rng)};
  result.corpus.sentences.reserve(l2_test.sentences.size());
  std::size_t chunk_cursor = 0;
  for (std::size_t s = 0; s < l2_test.sentences.size(); ++s) {
    const std::vector<Token>& tokens = l2_test.sentences[s].tokens;
    Sentence out;
    out.tokens.reserve(tokens.size());
    std::size_t next = 0;
    for (std::size_t ordinal = 0; chunk_cursor < l2_chunks.size() &&
                                  l2_chunks[chunk_cursor].sentence_index == s;
         ++chunk_cursor, ++ordinal) {
      const EntityChunk& chunk = l2_chunks[chunk_cursor];
      EntityKey key = EntityKeyOf(chunk);
      if (!partition.common_entities.contains(key)) continue;
      const std::vector<std::string>* replacement = nullptr;
      if (options.redraw_per_occurrence) {
        auto pool = pools.find(key.first);
        if (pool != pools.end()) {
          Rng occ = occurrence_streams.Fork(s).Fork(ordinal);
          replacement = pool->second[occ.Uniform(pool->second.size())];
        }
      } else if (auto it = per_type.find(key); it != per_type.end()) {
        replacement = it->second;
      }
      if (replacement == nullptr) {
        ++result.manifest.skipped.no_unique_entity;
        continue;
      }
      for (; next < chunk.span.begin; ++next) out.tokens.push_back(tokens[next]);
      AppendEntity(out.tokens, *replacement, chunk.label);
      next = chunk.span.end;
      result.manifest.records.push_back(
          {Rule::kP3, s, chunk.span, StrJoin(chunk.surface, " "),
           StrJoin(*replacement, " "), Mechanism::kEntitySwap, false});
    }
    for (; next < tokens.size(); ++next) out.tokens.push_back(tokens[next]);
    result.corpus.sentences.push_back(std::move(out));
  }
  return result;
}

absl::StatusOr<SubstitutionMap> BuildSubstitutions(
    const WordPartition& partition, const ContextSwapOptions& options,
    const Rng& rng) {
  std::vector<std::string> common(partition.common.begin(),
                                  partition.common.end());
  std::sort(common.begin(), common.end());
  SubstitutionMap map;

  if (options.mode == SubstitutionMode::kRandom) {
    std::vector<std::string> unique(partition.unique.begin(),
                                    partition.unique.end());
    std::sort(unique.begin(), unique.end());
    const Rng streams = rng.Fork("context/random");
    for (const std::string& word : common) {
      if (unique.empty()) {
        ++map.skipped.no_candidates;
        continue;
      }
      Rng word_rng = streams.Fork(word);
      map.substitutes[word] = unique[word_rng.Uniform(unique.size())];
    }
    return map;
  }

  if (options.table == nullptr || options.table->empty()) {
    return absl::FailedPreconditionError(
        "cosine substitution needs a nonempty embedding table");
  }
  const CandidateIndex index(partition.unique, *options.table);
  std::vector<absl::StatusOr<SimilarityResult>> found(
      common.size(), absl::UnknownError("not computed"));
  ParallelFor(common.size(), options.threads,
              [&](std::size_t i) { found[i] = index.Nearest(common[i]); });
  for (std::size_t i = 0; i < common.size(); ++i) {
    if (found[i].ok()) {
      map.substitutes[common[i]] = found[i]->word;
    } else if (IsMissingVector(found[i].status())) {
      ++map.skipped.missing_vector;
    } else if (IsNoCandidates(found[i].status())) {
      ++map.skipped.no_candidates;
    } else {
      return found[i].status();
    }
  }
  return map;
}

absl::StatusOr<PerturbResult> PerturbContextWords(
    const Corpus& l2_test, const Corpus& l1_train,
    const ContextSwapOptions& options, const Rng& rng) {
  const WordPartition partition =
      WordPartitionOf(l1_train, l2_test, options.stopwords);
  XLP_ASSIGN_OR_RETURN(SubstitutionMap map,
                       BuildSubstitutions(partition, options, rng));
  PerturbResult result{l2_test, NewManifest(Rule::kP4, rng)};
  result.manifest.mode = options.mode;
  result.manifest.skipped = map.skipped;
  const Mechanism mechanism = ContextMechanism(options.mode);
  for (std::size_t s = 0; s < result.corpus.sentences.size(); ++s) {
    std::vector<Token>& tokens = result.corpus.sentences[s].tokens;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      Token& token = tokens[i];
      if (!token.tag.is_outside()) continue;
      std::string form = ContentWordForm(token.text, options.stopwords);
      if (form.empty()) continue;
      auto it = map.substitutes.find(form);
      if (it == map.substitutes.end()) continue;
      std::string replacement = MatchCapitalization(it->second, token.text);
      result.manifest.records.push_back({Rule::kP4, s, TokenSpan{i, i + 1},
                                         token.text, replacement, mechanism,
                                         false});
      token.text = std::move(replacement);
    }
  }
  return result;
}

absl::StatusOr<PerturbResult> PerturbEntitiesAndContext(
    const Corpus& l2_test, const Corpus& l1_train,
    const ContextSwapOptions& options, const Rng& rng,
    const EntitySwapOptions& entity_options) {
  XLP_ASSIGN_OR_RETURN(PerturbResult entities,
                       PerturbSharedEntities(l2_test, l1_train,
                                             rng.Fork("p3"), entity_options));
  XLP_ASSIGN_OR_RETURN(PerturbResult context,
                       PerturbContextWords(entities.corpus, l1_train, options,
                                           rng.Fork("p4")));
  PerturbResult result{std::move(context.corpus), NewManifest(Rule::kP5, rng)};
  result.manifest.mode = options.mode;
  result.manifest.Merge(entities.manifest);
  result.manifest.Merge(context.manifest);
  return result;
}

absl::StatusOr<TitlePerturbResult> PerturbTitleContext(
    const TitleDataset& dataset, const TitleDataset& l1_train,
    const TitleTruncation& truncation, const ContextSwapOptions& options,
    const Rng& rng) {
  XLP_ASSIGN_OR_RETURN(WordSet l1_words,
                       TitleWords(l1_train, truncation, options.stopwords));
  XLP_ASSIGN_OR_RETURN(WordSet l2_words,
                       TitleWords(dataset, truncation, options.stopwords));
  XLP_ASSIGN_OR_RETURN(
      SubstitutionMap map,
      BuildSubstitutions(PartitionWords(l1_words, l2_words), options, rng));

  TitlePerturbResult result{dataset, NewManifest(Rule::kP4, rng)};
  result.manifest.mode = options.mode;
  result.manifest.skipped = map.skipped;
  const Mechanism mechanism = ContextMechanism(options.mode);
  for (std::size_t e = 0; e < result.dataset.examples.size(); ++e) {
    const std::string& text = dataset.examples[e].text;
    std::string rewritten;
    rewritten.reserve(text.size());
    std::size_t copied = 0;
    for (const TextSpan& span : SegmentWords(text)) {
      std::string_view piece =
          std::string_view(text).substr(span.begin, span.end - span.begin);
      std::string form = ContentWordForm(piece, options.stopwords);
      if (form.empty()) continue;
      auto it = map.substitutes.find(form);
      if (it == map.substitutes.end()) continue;
      std::string replacement = MatchCapitalization(it->second, piece);
      rewritten.append(text, copied, span.begin - copied);
      rewritten += replacement;
      copied = span.end;
      result.manifest.records.push_back(
          {Rule::kP4, e, TokenSpan{span.begin, span.end}, std::string(piece),
           replacement, mechanism, false});
    }
    rewritten.append(text, copied, std::string::npos);
    result.dataset.examples[e].text = std::move(rewritten);
  }
  return result;
}

}  // namespace xlp
