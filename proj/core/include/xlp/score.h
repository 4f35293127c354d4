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

#ifndef XLP_SCORE_H_
#define XLP_SCORE_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "xlp/corpus.h"
#include "xlp/overlap.h"
#include "xlp/stats.h"
#include "xlp/title_task.h"

namespace xlp {

enum class Task { kNer, kTitle };

std::string_view TaskName(Task task);
absl::StatusOr<Task> ParseTask(std::string_view name);

struct ScoreReport {
  Task task = Task::kNer;
  // NER only. Token-level F1 per BIO tag ("B-LOC", "I-LOC", ...), keyed by
  // the tags that occur in gold.
  std::map<std::string, double> per_class_f1;
  double macro_f1 = 0.0;
  // Exact-span chunk F1.
  double entity_f1 = 0.0;
  // Title only.
  double accuracy = 0.0;
  std::size_t n_items = 0;
};

std::string ScoreReportToJson(const ScoreReport& report);
absl::StatusOr<ScoreReport> ParseScoreReport(std::string_view json);

// Predicted tags, one per line. Lines may also be "<token> <tag>" (last
// field wins). Blank lines are sentence breaks and, if present, must line
// up with the gold sentences.
absl::StatusOr<std::vector<std::vector<BioTag>>> ParseTagPredictions(
    std::string_view text);

absl::StatusOr<ScoreReport> ScoreNer(
    const Corpus& gold, const std::vector<std::vector<BioTag>>& predicted);

// One integer answer index per line.
absl::StatusOr<std::vector<int>> ParseIndexPredictions(std::string_view text);

absl::StatusOr<ScoreReport> ScoreTitle(const TitleDataset& gold,
                                       std::span<const int> predictions);

// Field-wise arithmetic mean of runs of the same condition.
absl::StatusOr<ScoreReport> AverageRuns(std::span<const ScoreReport> reports);

struct DeltaRow {
  std::string pair;
  double overlap_percent = 0.0;
  double delta = 0.0;
};

// One row per pair (perturbed - base), ascending by overlap then pair name.
absl::StatusOr<std::vector<DeltaRow>> DeltaOverlapReport(
    const std::map<std::string, double>& overlap_percent,
    const std::map<std::string, double>& base,
    const std::map<std::string, double>& perturbed);

std::string FormatDeltaCsv(const std::vector<DeltaRow>& rows);

// Results table rows: one language pair under one model/task/condition with
// its base score and any of p1..p5.
struct ResultsRow {
  std::string model;
  std::string task;
  std::string pair;
  std::string condition;  // "native" or "transfer"
  double base = 0.0;
  std::map<std::string, double> perturbed;  // "p1".."p5"
};

// CSV with a header. Required columns: pair, condition, base. Optional:
// model, task, p1..p5 (empty cells mean not applicable).
absl::StatusOr<std::vector<ResultsRow>> ParseResultsCsv(std::string_view text);

struct SignificanceRow {
  std::string model;
  std::string task;
  std::string condition;
  std::string rule;
  std::size_t n = 0;
  TTestResult test;
};

// Paired t-test of every rule against base within each
// (model, task, condition) group, in first-appearance order.
absl::StatusOr<std::vector<SignificanceRow>> SignificanceTable(
    const std::vector<ResultsRow>& rows);

// "p < 0.0001" below 1e-4, otherwise "p = 0.0118".
std::string FormatPValue(double p);

std::string FormatSignificanceCsv(const std::vector<SignificanceRow>& rows);

}  // namespace xlp

#endif  // XLP_SCORE_H_
