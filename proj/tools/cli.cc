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

#include "cli.h"

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cli_common.h"
#include "fmt/format.h"
#include "xlp/corpus.h"
#include "xlp/file_util.h"
#include "xlp/lexicon.h"
#include "xlp/overlap.h"
#include "xlp/perturb.h"
#include "xlp/rng.h"
#include "xlp/score.h"
#include "xlp/status_macros.h"
#include "xlp/title_task.h"
#include "xlp/wiki_client.h"

namespace xlp::cli {
namespace {

int Fail(std::ostream& err, std::string_view command, int code,
         const absl::Status& status) {
  err << "xlp " << command << ": " << status.message() << "\n";
  return code;
}

int DataError(std::ostream& err, std::string_view command,
              const absl::Status& status) {
  return Fail(err, command, kExitData, status);
}

int UsageError(std::ostream& err, std::string_view command,
               std::string_view message) {
  err << "xlp " << command << ": " << message << "\n"
      << "Run 'xlp " << command << " --help' for usage.\n";
  return kExitUsage;
}

int UsageError(std::ostream& err, std::string_view command,
               const absl::Status& status) {
  return UsageError(err, command, std::string(status.message()));
}

// Writes to `path` atomically, or to `out` when `path` is empty or "-".
absl::Status Emit(const std::string& path, std::string_view text,
                  std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return absl::OkStatus();
  }
  return WriteFileAtomically(path, text);
}

std::string OrDefault(const std::string& value, const std::string& path) {
  return value.empty() ? LanguageFromPath(path) : value;
}

// Options shared by every subcommand that reads CoNLL files.
struct CorpusFlags {
  bool strip_language_prefix = false;
};

void AddCorpusFlags(CLI::App* sub, CorpusFlags* flags) {
  sub->add_flag("--strip-lang-prefix", flags->strip_language_prefix,
                "Strip a leading '<lang>:' from every token (WikiANN dumps)");
}

// ---- validate ----

struct ValidateFlags {
  std::string input;
  std::string language;
  std::string repair_out;
  bool strict = false;
  std::size_t max_report = 20;
  CorpusFlags corpus;
};

void AddValidate(CLI::App& app, ValidateFlags* f) {
  CLI::App* sub = app.add_subcommand(
      "validate", "Check a CoNLL file for malformed lines and BIO errors");
  sub->add_option("--in", f->input, "CoNLL file")->required();
  sub->add_option("--lang", f->language, "Language code (default: from name)");
  sub->add_option("--repair-out", f->repair_out,
                  "Write a repaired copy here (stray I-X become B-X)");
  sub->add_flag("--strict", f->strict, "Exit 2 when any violation is found");
  sub->add_option("--max-report", f->max_report,
                  "Violations to list individually")
      ->capture_default_str();
  AddCorpusFlags(sub, &f->corpus);
}

int RunValidate(const ValidateFlags& f, std::ostream& out, std::ostream& err) {
  if (absl::Status s = CheckNotAnInput(f.repair_out, {f.input}); !s.ok()) {
    return UsageError(err, "validate", s);
  }
  ParseOptions options;
  options.strip_language_prefix = f.corpus.strip_language_prefix;
  auto corpus = LoadConll(f.input, OrDefault(f.language, f.input), options);
  if (!corpus.ok()) return DataError(err, "validate", corpus.status());
  std::size_t violations = 0;
  for (std::size_t s = 0; s < corpus->sentences.size(); ++s) {
    BioCheck check = ValidateBio(corpus->sentences[s], BioMode::kRepair);
    for (const BioViolation& v : check.violations) {
      if (violations++ < f.max_report) {
        out << "sentence " << s << " token " << v.index << ": "
            << v.description << "\n";
      }
    }
    corpus->sentences[s] = std::move(check.sentence);
  }
  out << "sentences=" << corpus->sentences.size()
      << " tokens=" << corpus->token_count() << " violations=" << violations
      << "\n";
  if (!f.repair_out.empty()) {
    if (absl::Status s = WriteFileAtomically(f.repair_out,
                                             SerializeConll(*corpus));
        !s.ok()) {
      return DataError(err, "validate", s);
    }
  }
  return f.strict && violations > 0 ? kExitData : kExitOk;
}

// ---- fetch-lexicon ----

struct FetchFlags {
  std::string language;
  std::string kind;
  std::string out;
  std::string endpoint;
  std::string category_template;
  std::string cache_dir;
  std::string snapshot = "live";
  std::size_t page_limit = 1000;
  double rate = 5.0;
};

void AddFetch(CLI::App& app, FetchFlags* f) {
  CLI::App* sub = app.add_subcommand(
      "fetch-lexicon",
      "Download given names or placenames from a MediaWiki category");
  sub->add_option("--lang", f->language, "ISO 639 code")->required();
  sub->add_option("--kind", f->kind, "given-names or places")
      ->required()
      ->check(CLI::IsMember({"given-names", "places"}));
  sub->add_option("--out", f->out, "Lexicon file to write")->required();
  sub->add_option("--endpoint", f->endpoint,
                  "api.php URL (default: English Wiktionary)");
  sub->add_option("--template", f->category_template,
                  "Category title template; {lang} and {name} expand");
  sub->add_option("--cache-dir", f->cache_dir, "Cache raw API responses here");
  sub->add_option("--snapshot", f->snapshot, "Cache key label")
      ->capture_default_str();
  sub->add_option("--page-limit", f->page_limit, "Maximum API pages")
      ->capture_default_str();
  sub->add_option("--rate", f->rate, "Maximum requests per second")
      ->capture_default_str();
}

int RunFetch(const FetchFlags& f, std::ostream& out, std::ostream& err) {
  absl::StatusOr<LexiconKind> kind = ParseLexiconKind(f.kind);
  if (!kind.ok()) return UsageError(err, "fetch-lexicon", kind.status());
  RateLimiter limiter(f.rate);
  CategoryFetchOptions options;
  if (!f.endpoint.empty()) options.endpoint = f.endpoint;
  if (!f.category_template.empty()) {
    (*kind == LexiconKind::kGivenNames ? options.given_names_template
                                       : options.places_template) =
        f.category_template;
  }
  options.cache_dir = f.cache_dir;
  options.snapshot = f.snapshot;
  options.page_limit = f.page_limit;
  options.rate_limiter = &limiter;
  auto result = FetchCategory(f.language, *kind, options);
  if (!result.ok()) return DataError(err, "fetch-lexicon", result.status());
  for (const std::string& w : result->warnings) err << "warning: " << w << "\n";
  if (absl::Status s = SaveLexicon(result->lexicon, f.out); !s.ok()) {
    return DataError(err, "fetch-lexicon", s);
  }
  out << "entries=" << result->lexicon.size()
      << " pages=" << result->pages_requested << "\n";
  return kExitOk;
}

// ---- overlap ----

struct OverlapFlags {
  std::string task = "ner";
  std::string l1_train;
  std::string l2_test;
  std::string stopwords;
  std::string tokens;
  std::string l1_language;
  std::string l2_language;
  bool all_tokens = false;
  bool header = false;
  CorpusFlags corpus;
};

void AddOverlap(CLI::App& app, OverlapFlags* f) {
  CLI::App* sub = app.add_subcommand(
      "overlap", "Vocabulary overlap between L1 training and L2 test data");
  sub->add_option("--task", f->task, "ner or title")
      ->check(CLI::IsMember({"ner", "title"}))
      ->capture_default_str();
  sub->add_option("--l1-train", f->l1_train, "L1 training data")->required();
  sub->add_option("--l2-test", f->l2_test, "L2 test data")->required();
  sub->add_option("--stopwords", f->stopwords,
                  "Stopword list, one per line (title task)");
  sub->add_option("--tokens", f->tokens,
                  "Token-count sidecar marking the first 128 model tokens");
  sub->add_option("--l1-lang", f->l1_language, "L1 code (default: from name)");
  sub->add_option("--l2-lang", f->l2_language, "L2 code (default: from name)");
  sub->add_flag("--all-tokens", f->all_tokens,
                "NER: divide by all L2 tokens instead of entity tokens");
  sub->add_flag("--header", f->header, "Print a CSV header line first");
  AddCorpusFlags(sub, &f->corpus);
}

int RunOverlap(const OverlapFlags& f, std::ostream& out, std::ostream& err) {
  const std::string l1 = OrDefault(f.l1_language, f.l1_train);
  const std::string l2 = OrDefault(f.l2_language, f.l2_test);
  Resources resources(f.corpus.strip_language_prefix, err);
  absl::StatusOr<OverlapReport> report;
  if (f.task == "ner") {
    auto train = resources.Ner(f.l1_train, l1);
    if (!train.ok()) return DataError(err, "overlap", train.status());
    auto test = resources.Ner(f.l2_test, l2);
    if (!test.ok()) return DataError(err, "overlap", test.status());
    report = NerWordOverlap(**train, **test,
                            f.all_tokens ? NerDenominator::kAllTokens
                                         : NerDenominator::kEntityTokens);
  } else {
    auto train = resources.Titles(f.l1_train, l1);
    if (!train.ok()) return DataError(err, "overlap", train.status());
    auto test = resources.Titles(f.l2_test, l2);
    if (!test.ok()) return DataError(err, "overlap", test.status());
    auto stopwords = resources.Stopwords(f.stopwords);
    if (!stopwords.ok()) return DataError(err, "overlap", stopwords.status());
    auto truncation = resources.Truncation(f.tokens);
    if (!truncation.ok()) return DataError(err, "overlap", truncation.status());
    report = TitleWordOverlap(**train, **test, **truncation, **stopwords);
  }
  if (!report.ok()) return DataError(err, "overlap", report.status());
  if (f.header) out << "l1,l2,shared,total,percent\n";
  out << fmt::format("{},{},{},{},{:.2f}\n", l1, l2, report->shared_count,
                     report->total_count, report->percent());
  return kExitOk;
}

// ---- perturb ----

struct PerturbFlags {
  std::string task = "ner";
  std::string rule;
  std::string mode = "cosine";
  std::uint64_t seed = 0;
  std::string out;
  std::string manifest;
  PerturbRequest request;
  CorpusFlags corpus;
};

void AddPerturb(CLI::App& app, PerturbFlags* f) {
  CLI::App* sub = app.add_subcommand(
      "perturb", "Apply perturbation p1..p5 to an L2 test set");
  PerturbRequest& r = f->request;
  sub->add_option("--task", f->task, "ner or title (title supports p4 only)")
      ->check(CLI::IsMember({"ner", "title"}))
      ->capture_default_str();
  sub->add_option("--rule", f->rule,
                  "p1 given names, p2 placenames, p3 shared entities, "
                  "p4 shared context words, p5 = p3 then p4")
      ->required()
      ->check(CLI::IsMember({"p1", "p2", "p3", "p4", "p5"}));
  sub->add_option("--mode", f->mode, "Substitute choice for p4/p5")
      ->check(CLI::IsMember({"cosine", "random"}))
      ->capture_default_str();
  sub->add_option("--l2-test", r.l2_test, "L2 test data to perturb")
      ->required();
  sub->add_option("--l1-train", r.l1_train, "L1 training data (p3, p4, p5)");
  sub->add_option("--lexicon", r.lexicon,
                  "Given-name (p1) or placename (p2) lexicon");
  sub->add_option("--embeddings", r.embeddings,
                  "Word vectors for cosine mode");
  sub->add_option("--stopwords", r.stopwords, "Stopword list (p4, p5)");
  sub->add_option("--tokens", r.tokens, "Token-count sidecar (title task)");
  sub->add_option("--l1-lang", r.l1_language, "L1 code (default: from name)");
  sub->add_option("--l2-lang", r.l2_language, "L2 code (default: from name)");
  sub->add_option("--seed", f->seed, "64-bit seed")->required();
  sub->add_option("--out", f->out, "Perturbed output file")->required();
  sub->add_option("--manifest", f->manifest, "Manifest JSON file")
      ->required();
  sub->add_flag("--redraw-per-occurrence", r.redraw_per_occurrence,
                "p3/p5: draw a replacement per occurrence, not per entity");
  sub->add_option("--threads", r.threads,
                  "Worker threads for the cosine search (0 = all cores)")
      ->capture_default_str();
  AddCorpusFlags(sub, &f->corpus);
}

int RunPerturb(PerturbFlags f, std::ostream& out, std::ostream& err) {
  PerturbRequest& r = f.request;
  r.task = f.task == "title" ? Task::kTitle : Task::kNer;
  r.rule = *ParseRule(f.rule);
  r.mode = *ParseSubstitutionMode(f.mode);
  r.seed = f.seed;
  r.l1_language = OrDefault(r.l1_language, r.l1_train);
  r.l2_language = OrDefault(r.l2_language, r.l2_test);
  if (absl::Status s = CheckPerturbRequest(r); !s.ok()) {
    return UsageError(err, "perturb", s);
  }
  const std::vector<std::string> inputs = {r.l2_test,    r.l1_train,
                                           r.lexicon,    r.embeddings,
                                           r.stopwords,  r.tokens};
  for (const std::string* target : {&f.out, &f.manifest}) {
    if (absl::Status s = CheckNotAnInput(*target, inputs); !s.ok()) {
      return UsageError(err, "perturb", s);
    }
  }
  if (f.out == f.manifest) {
    return UsageError(err, "perturb", "--out and --manifest must differ");
  }
  Resources resources(f.corpus.strip_language_prefix, err);
  auto result = RunPerturbation(r, resources);
  if (!result.ok()) return DataError(err, "perturb", result.status());
  if (absl::Status s = WriteFileAtomically(f.out, result->text); !s.ok()) {
    return DataError(err, "perturb", s);
  }
  if (absl::Status s = WriteFileAtomically(
          f.manifest, ManifestToJson(result->manifest));
      !s.ok()) {
    return DataError(err, "perturb", s);
  }
  const SkipCounts& skipped = result->manifest.skipped;
  out << "records=" << result->manifest.records.size()
      << " skipped_no_unique_entity=" << skipped.no_unique_entity
      << " skipped_missing_vector=" << skipped.missing_vector
      << " skipped_no_candidates=" << skipped.no_candidates
      << " extended_spans=" << result->manifest.extended_spans << "\n";
  return kExitOk;
}

// ---- build-titles / split ----

struct BuildFlags {
  std::string input;
  std::string language;
  std::size_t cap = kDefaultTitleCap;
  std::uint64_t seed = 0;
  std::string out;
};

void AddBuild(CLI::App& app, BuildFlags* f) {
  CLI::App* sub = app.add_subcommand(
      "build-titles", "Build the section title prediction dataset");
  sub->add_option("--in", f->input,
                  "JSON-lines article records with sections")
      ->required();
  sub->add_option("--lang", f->language, "Language code")->required();
  sub->add_option("--cap", f->cap, "Maximum number of examples")
      ->capture_default_str();
  sub->add_option("--seed", f->seed, "64-bit seed")->required();
  sub->add_option("--out", f->out, "Dataset JSON-lines file")->required();
}

int RunBuild(const BuildFlags& f, std::ostream& out, std::ostream& err) {
  if (absl::Status s = CheckNotAnInput(f.out, {f.input}); !s.ok()) {
    return UsageError(err, "build-titles", s);
  }
  auto text = ReadFile(f.input);
  if (!text.ok()) return DataError(err, "build-titles", text.status());
  std::istringstream input(*text);
  ExtractionStats extraction;
  std::vector<Page> pages = ExtractSections(input, &extraction);
  for (const std::string& w : extraction.warnings) {
    err << "warning: " << f.input << ": " << w << "\n";
  }
  BuildStats stats;
  TitleDataset dataset =
      BuildExamples(pages, f.language, Rng(f.seed), f.cap, &stats);
  if (absl::Status s = SaveTitleDataset(dataset, f.out); !s.ok()) {
    return DataError(err, "build-titles", s);
  }
  out << "records=" << extraction.records
      << " malformed=" << extraction.malformed
      << " pages=" << extraction.pages_kept
      << " pages_too_small=" << extraction.pages_too_small
      << " pages_few_titles=" << stats.pages_skipped_few_titles
      << " candidates=" << stats.candidate_examples
      << " examples=" << dataset.examples.size() << "\n";
  return kExitOk;
}

struct SplitFlags {
  std::string input;
  std::string language;
  double ratio = 0.8;
  std::uint64_t seed = 0;
  bool group_by_page = false;
  std::string train_out;
  std::string test_out;
};

void AddSplit(CLI::App& app, SplitFlags* f) {
  CLI::App* sub =
      app.add_subcommand("split", "Split a title dataset into train and test");
  sub->add_option("--in", f->input, "Dataset JSON-lines file")->required();
  sub->add_option("--lang", f->language, "Language code (default: from name)");
  sub->add_option("--ratio", f->ratio, "Training fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sub->add_option("--seed", f->seed, "64-bit seed")->required();
  sub->add_flag("--group-by-page", f->group_by_page,
                "Keep all sections of a page on one side");
  sub->add_option("--train-out", f->train_out, "Training split")->required();
  sub->add_option("--test-out", f->test_out, "Test split")->required();
}

int RunSplit(const SplitFlags& f, std::ostream& out, std::ostream& err) {
  for (const std::string* target : {&f.train_out, &f.test_out}) {
    if (absl::Status s = CheckNotAnInput(*target, {f.input}); !s.ok()) {
      return UsageError(err, "split", s);
    }
  }
  if (f.train_out == f.test_out) {
    return UsageError(err, "split", "--train-out and --test-out must differ");
  }
  auto dataset = LoadTitleDataset(f.input, OrDefault(f.language, f.input));
  if (!dataset.ok()) return DataError(err, "split", dataset.status());
  SplitOptions options;
  options.train_ratio = f.ratio;
  options.group_by_page = f.group_by_page;
  auto [train, test] = SplitDataset(*dataset, Rng(f.seed), options);
  if (absl::Status s = SaveTitleDataset(train, f.train_out); !s.ok()) {
    return DataError(err, "split", s);
  }
  if (absl::Status s = SaveTitleDataset(test, f.test_out); !s.ok()) {
    return DataError(err, "split", s);
  }
  out << "train=" << train.examples.size() << " test=" << test.examples.size()
      << "\n";
  return kExitOk;
}

// ---- score ----

struct ScoreFlags {
  std::string task;
  std::string gold;
  std::vector<std::string> predictions;
  std::string language;
  std::string out;
  CorpusFlags corpus;
};

void AddScore(CLI::App& app, ScoreFlags* f) {
  CLI::App* sub = app.add_subcommand(
      "score", "Score prediction files; several --pred are averaged");
  sub->add_option("--task", f->task, "ner or title")
      ->required()
      ->check(CLI::IsMember({"ner", "title"}));
  sub->add_option("--gold", f->gold, "Gold CoNLL or title dataset")
      ->required();
  sub->add_option("--pred", f->predictions,
                  "Predictions: one tag (ner) or answer index (title) per "
                  "line; repeat for several runs")
      ->required();
  sub->add_option("--lang", f->language, "Language code (default: from name)");
  sub->add_option("--out", f->out, "Report JSON (default: stdout)");
  AddCorpusFlags(sub, &f->corpus);
}

absl::StatusOr<ScoreReport> ScoreOne(const Corpus* ner_gold,
                                     const TitleDataset* title_gold,
                                     const std::string& path) {
  XLP_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  absl::StatusOr<ScoreReport> report;
  if (ner_gold != nullptr) {
    XLP_ASSIGN_OR_RETURN(auto tags, ParseTagPredictions(text));
    report = ScoreNer(*ner_gold, tags);
  } else {
    XLP_ASSIGN_OR_RETURN(std::vector<int> indices,
                         ParseIndexPredictions(text));
    report = ScoreTitle(*title_gold, indices);
  }
  if (!report.ok()) {
    return absl::Status(report.status().code(),
                        fmt::format("{}: {}", path,
                                    std::string(report.status().message())));
  }
  return report;
}

int RunScore(const ScoreFlags& f, std::ostream& out, std::ostream& err) {
  const std::string language = OrDefault(f.language, f.gold);
  std::optional<Corpus> ner_gold;
  std::optional<TitleDataset> title_gold;
  if (f.task == "ner") {
    ParseOptions options;
    options.strip_language_prefix = f.corpus.strip_language_prefix;
    auto gold = LoadConll(f.gold, language, options);
    if (!gold.ok()) return DataError(err, "score", gold.status());
    ner_gold = std::move(*gold);
  } else {
    auto gold = LoadTitleDataset(f.gold, language);
    if (!gold.ok()) return DataError(err, "score", gold.status());
    title_gold = std::move(*gold);
  }
  std::vector<ScoreReport> reports;
  for (const std::string& path : f.predictions) {
    auto report = ScoreOne(ner_gold ? &*ner_gold : nullptr,
                           title_gold ? &*title_gold : nullptr, path);
    if (!report.ok()) return DataError(err, "score", report.status());
    reports.push_back(std::move(*report));
  }
  auto averaged = AverageRuns(reports);
  if (!averaged.ok()) return DataError(err, "score", averaged.status());
  if (absl::Status s = Emit(f.out, ScoreReportToJson(*averaged), out);
      !s.ok()) {
    return DataError(err, "score", s);
  }
  return kExitOk;
}

// ---- stats ----

struct StatsFlags {
  std::string results;
  std::string out;
};

void AddStats(CLI::App& app, StatsFlags* f) {
  CLI::App* sub = app.add_subcommand(
      "stats", "Paired t-tests of each perturbation against the baseline");
  sub->add_option("--results", f->results,
                  "Results CSV: [model,task,]pair,condition,base,p1..p5")
      ->required();
  sub->add_option("--out", f->out, "Significance CSV (default: stdout)");
}

int RunStats(const StatsFlags& f, std::ostream& out, std::ostream& err) {
  auto text = ReadFile(f.results);
  if (!text.ok()) return DataError(err, "stats", text.status());
  auto rows = ParseResultsCsv(*text);
  if (!rows.ok()) {
    return DataError(err, "stats",
                     absl::Status(rows.status().code(),
                                  fmt::format("{}: {}", f.results,
                                              std::string(
                                                  rows.status().message()))));
  }
  auto table = SignificanceTable(*rows);
  if (!table.ok()) return DataError(err, "stats", table.status());
  if (absl::Status s = Emit(f.out, FormatSignificanceCsv(*table), out);
      !s.ok()) {
    return DataError(err, "stats", s);
  }
  return kExitOk;
}

// ---- report ----

struct ReportFlags {
  std::string overlap;
  std::string results;
  std::string rule;
  std::string model;
  std::string task;
  std::string condition = "transfer";
  std::string out;
};

void AddReport(CLI::App& app, ReportFlags* f) {
  CLI::App* sub = app.add_subcommand(
      "report", "Join per-pair overlap with the score change under a rule");
  sub->add_option("--overlap", f->overlap,
                  "Overlap CSV rows '[task,]l1,l2,shared,total,percent'")
      ->required();
  sub->add_option("--results", f->results, "Results CSV")->required();
  sub->add_option("--rule", f->rule, "Perturbation column")
      ->required()
      ->check(CLI::IsMember({"p1", "p2", "p3", "p4", "p5"}));
  sub->add_option("--model", f->model, "Keep only this model");
  sub->add_option("--task", f->task, "Keep only this task");
  sub->add_option("--condition", f->condition, "native or transfer")
      ->capture_default_str();
  sub->add_option("--out", f->out, "Output CSV (default: stdout)");
}

// "es an", "es/an" and "es-an" all name the same pair.
std::string PairKey(std::string pair) {
  for (char& c : pair) {
    if (c == ' ' || c == '/' || c == '_') c = '-';
  }
  return pair;
}

absl::StatusOr<std::map<std::string, double>> ParseOverlapCsv(
    std::string_view text, const std::string& task) {
  std::map<std::string, double> percent;
  std::istringstream lines{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream fields(line);
    for (std::string cell; std::getline(fields, cell, ',');) {
      cells.push_back(cell);
    }
    if (cells.size() == 6) {
      if (cells[0] == "task") continue;
      if (!task.empty() && cells[0] != task) continue;
      cells.erase(cells.begin());
    }
    if (cells.size() != 5) {
      return absl::InvalidArgumentError(fmt::format(
          "line {}: expected [task,]l1,l2,shared,total,percent", line_no));
    }
    if (cells[0] == "l1") continue;
    try {
      std::size_t used = 0;
      double value = std::stod(cells[4], &used);
      if (used != cells[4].size()) throw std::invalid_argument(cells[4]);
      percent[cells[0] + "-" + cells[1]] = value;
    } catch (const std::exception&) {
      return absl::InvalidArgumentError(
          fmt::format("line {}: bad percent '{}'", line_no, cells[4]));
    }
  }
  return percent;
}

int RunReport(const ReportFlags& f, std::ostream& out, std::ostream& err) {
  auto overlap_text = ReadFile(f.overlap);
  if (!overlap_text.ok()) return DataError(err, "report", overlap_text.status());
  auto overlap = ParseOverlapCsv(*overlap_text, f.task);
  if (!overlap.ok()) {
    return DataError(err, "report",
                     absl::InvalidArgumentError(fmt::format(
                         "{}: {}", f.overlap,
                         std::string(overlap.status().message()))));
  }
  auto results_text = ReadFile(f.results);
  if (!results_text.ok()) return DataError(err, "report", results_text.status());
  auto rows = ParseResultsCsv(*results_text);
  if (!rows.ok()) return DataError(err, "report", rows.status());
  std::map<std::string, double> base;
  std::map<std::string, double> perturbed;
  for (const ResultsRow& row : *rows) {
    if (!f.model.empty() && row.model != f.model) continue;
    if (!f.task.empty() && row.task != f.task) continue;
    if (row.condition != f.condition) continue;
    auto it = row.perturbed.find(f.rule);
    if (it == row.perturbed.end()) continue;
    const std::string key = PairKey(row.pair);
    if (base.contains(key)) {
      return UsageError(err, "report",
                        fmt::format("pair {} appears more than once; narrow "
                                    "with --model/--task",
                                    key));
    }
    base[key] = row.base;
    perturbed[key] = it->second;
  }
  // Pairs without scores for this rule are not part of the figure.
  std::map<std::string, double> joined_overlap;
  for (const auto& [pair, _] : base) {
    auto it = overlap->find(pair);
    if (it != overlap->end()) joined_overlap[pair] = it->second;
  }
  for (auto it = base.begin(); it != base.end();) {
    if (!joined_overlap.contains(it->first)) {
      err << "warning: no overlap for pair " << it->first << "; dropped\n";
      perturbed.erase(it->first);
      it = base.erase(it);
    } else {
      ++it;
    }
  }
  auto delta = DeltaOverlapReport(joined_overlap, base, perturbed);
  if (!delta.ok()) return DataError(err, "report", delta.status());
  if (absl::Status s = Emit(f.out, FormatDeltaCsv(*delta), out); !s.ok()) {
    return DataError(err, "report", s);
  }
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{
      "Vocabulary-overlap perturbation toolkit for cross-lingual NER and "
      "section title prediction",
      "xlp"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  ValidateFlags validate;
  FetchFlags fetch;
  OverlapFlags overlap;
  PerturbFlags perturb;
  BuildFlags build;
  SplitFlags split;
  ScoreFlags score;
  StatsFlags stats;
  ReportFlags report;
  std::string config;
  AddValidate(app, &validate);
  AddFetch(app, &fetch);
  AddOverlap(app, &overlap);
  AddPerturb(app, &perturb);
  AddBuild(app, &build);
  AddSplit(app, &split);
  AddScore(app, &score);
  AddStats(app, &stats);
  AddReport(app, &report);
  CLI::App* pipeline = app.add_subcommand(
      "pipeline", "Produce every artifact for one language pair");
  pipeline->add_option("--config", config, "key = value config file")
      ->required();

  // CLI11 parses in reverse order from a vector.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    if (app.get_subcommands().empty()) {
      out << app.help();
    } else {
      out << app.get_subcommands().front()->help();
    }
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "xlp: " << e.what() << "\n";
    for (CLI::App* sub : app.get_subcommands()) {
      err << "Run 'xlp " << sub->get_name() << " --help' for usage.\n";
    }
    if (app.get_subcommands().empty()) err << "Run 'xlp --help' for usage.\n";
    return kExitUsage;
  }

  const std::string& name = app.get_subcommands().front()->get_name();
  if (name == "validate") return RunValidate(validate, out, err);
  if (name == "fetch-lexicon") return RunFetch(fetch, out, err);
  if (name == "overlap") return RunOverlap(overlap, out, err);
  if (name == "perturb") return RunPerturb(perturb, out, err);
  if (name == "build-titles") return RunBuild(build, out, err);
  if (name == "split") return RunSplit(split, out, err);
  if (name == "score") return RunScore(score, out, err);
  if (name == "stats") return RunStats(stats, out, err);
  if (name == "report") return RunReport(report, out, err);
  return RunPipeline(config, out, err);
}

}  // namespace xlp::cli
