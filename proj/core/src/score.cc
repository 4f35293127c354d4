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

#include "xlp/score.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"
#include "xlp/status_macros.h"
#include "xlp/text.h"
#include "str_util.h"

namespace xlp {
namespace {

using json = nlohmann::ordered_json;

double F1(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
}

// Gives `predicted` the sentence shape of `gold`. A prediction file without
// blank lines is accepted as one long run of tags.
absl::StatusOr<std::vector<std::vector<BioTag>>> AlignPredictions(
    const Corpus& gold, const std::vector<std::vector<BioTag>>& predicted) {
  std::size_t predicted_total = 0;
  for (const auto& s : predicted) predicted_total += s.size();
  if (predicted.size() == 1 && gold.sentences.size() > 1 &&
      predicted_total == gold.token_count()) {
    std::vector<std::vector<BioTag>> shaped;
    std::size_t k = 0;
    for (const Sentence& s : gold.sentences) {
      shaped.emplace_back(predicted[0].begin() + k,
                          predicted[0].begin() + k + s.tokens.size());
      k += s.tokens.size();
    }
    return shaped;
  }
  std::size_t offset = 0;
  const std::size_t common =
      std::min(predicted.size(), gold.sentences.size());
  for (std::size_t i = 0; i < common; ++i) {
    const std::size_t g = gold.sentences[i].tokens.size();
    if (predicted[i].size() != g) {
      // Positions are 1-based; the token is the first one without a partner.
      return absl::InvalidArgumentError(StrCat(
          "prediction misaligned at sentence ", i + 1, " (token ",
          offset + std::min(g, predicted[i].size()) + 1, "): gold has ", g,
          " tokens, prediction has ", predicted[i].size()));
    }
    offset += g;
  }
  if (predicted.size() != gold.sentences.size()) {
    return absl::InvalidArgumentError(StrCat(
        "prediction misaligned at sentence ", common + 1, " (token ",
        offset + 1, "): gold has ", gold.sentences.size(), " sentences, prediction has ",
        predicted.size()));
  }
  return predicted;
}

std::string FormatNumber(double x) { return StrFormat("%.6g", x); }

}  // namespace

std::string_view TaskName(Task task) {
  return task == Task::kNer ? "ner" : "title";
}

absl::StatusOr<Task> ParseTask(std::string_view name) {
  if (name == "ner") return Task::kNer;
  if (name == "title") return Task::kTitle;
  return absl::InvalidArgumentError(StrCat("unknown task '", name, "'"));
}

std::string ScoreReportToJson(const ScoreReport& r) {
  json doc;
  doc["task"] = TaskName(r.task);
  doc["n_items"] = r.n_items;
  if (r.task == Task::kNer) {
    doc["macro_f1"] = r.macro_f1;
    doc["entity_f1"] = r.entity_f1;
    json classes = json::object();
    for (const auto& [label, f1] : r.per_class_f1) classes[label] = f1;
    doc["per_class_f1"] = std::move(classes);
  } else {
    doc["accuracy"] = r.accuracy;
  }
  return doc.dump(2) + "\n";
}

absl::StatusOr<ScoreReport> ParseScoreReport(std::string_view text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("task") ||
      !doc["task"].is_string() || !doc.contains("n_items") ||
      !doc["n_items"].is_number_unsigned()) {
    return absl::InvalidArgumentError("score report needs task and n_items");
  }
  ScoreReport r;
  XLP_ASSIGN_OR_RETURN(r.task, ParseTask(doc["task"].get<std::string>()));
  r.n_items = doc["n_items"].get<std::size_t>();
  auto number = [&](const char* key) -> absl::StatusOr<double> {
    if (!doc.contains(key) || !doc[key].is_number()) {
      return absl::InvalidArgumentError(
          StrCat("score report missing number '", key, "'"));
    }
    return doc[key].get<double>();
  };
  if (r.task == Task::kNer) {
    XLP_ASSIGN_OR_RETURN(r.macro_f1, number("macro_f1"));
    XLP_ASSIGN_OR_RETURN(r.entity_f1, number("entity_f1"));
    if (!doc.contains("per_class_f1") || !doc["per_class_f1"].is_object()) {
      return absl::InvalidArgumentError("score report missing per_class_f1");
    }
    for (const auto& [label, value] : doc["per_class_f1"].items()) {
      if (!value.is_number()) {
        return absl::InvalidArgumentError("per_class_f1 value not a number");
      }
      r.per_class_f1[label] = value.get<double>();
    }
  } else {
    XLP_ASSIGN_OR_RETURN(r.accuracy, number("accuracy"));
  }
  return r;
}

absl::StatusOr<std::vector<std::vector<BioTag>>> ParseTagPredictions(
    std::string_view text) {
  std::vector<std::vector<BioTag>> out;
  std::vector<BioTag> current;
  std::size_t line_no = 0;
  for (std::string_view line : StrSplit(text, '\n')) {
    ++line_no;
    line = StripSuffix(line, "\r");
    std::vector<std::string_view> fields =
        SplitAnySkipEmpty(line, " \t");
    if (fields.empty()) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
      continue;
    }
    auto tag = BioTag::Parse(fields.back());
    if (!tag.ok()) {
      return absl::InvalidArgumentError(
          StrCat("line ", line_no, ": ", tag.status().message()));
    }
    current.push_back(*std::move(tag));
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

absl::StatusOr<ScoreReport> ScoreNer(
    const Corpus& gold, const std::vector<std::vector<BioTag>>& predicted) {
  XLP_ASSIGN_OR_RETURN(auto aligned, AlignPredictions(gold, predicted));

  struct Counts {
    std::size_t tp = 0, fp = 0, fn = 0;
  };
  std::map<std::string, Counts> per_tag;
  bool predicted_any_entity = false;
  ScoreReport report;
  report.task = Task::kNer;
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    for (std::size_t i = 0; i < aligned[s].size(); ++i) {
      const BioTag& g = gold.sentences[s].tokens[i].tag;
      const BioTag& p = aligned[s][i];
      ++report.n_items;
      if (!g.is_outside()) per_tag[g.ToString()];
      if (!p.is_outside()) predicted_any_entity = true;
      if (g == p) {
        if (!g.is_outside()) ++per_tag[g.ToString()].tp;
        continue;
      }
      if (!g.is_outside()) ++per_tag[g.ToString()].fn;
      if (!p.is_outside()) ++per_tag[p.ToString()].fp;
    }
  }
  // Only tags that occur in gold are classes.
  std::set<std::string> gold_tags;
  for (const Sentence& s : gold.sentences) {
    for (const Token& t : s.tokens) {
      if (!t.tag.is_outside()) gold_tags.insert(t.tag.ToString());
    }
  }
  double sum = 0.0;
  for (const std::string& tag : gold_tags) {
    const Counts& c = per_tag[tag];
    const double f1 = F1(c.tp, c.fp, c.fn);
    report.per_class_f1[tag] = f1;
    sum += f1;
  }
  report.macro_f1 = gold_tags.empty() ? (predicted_any_entity ? 0.0 : 1.0)
                                      : sum / gold_tags.size();

  // Chunk-level F1 on repaired copies so stray I- tags in predictions still
  // form chunks.
  std::size_t gold_chunks = 0, pred_chunks = 0, matched = 0;
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    Sentence g = ValidateBio(gold.sentences[s], BioMode::kRepair).sentence;
    Sentence p = g;
    for (std::size_t i = 0; i < p.tokens.size(); ++i) {
      p.tokens[i].tag = aligned[s][i];
    }
    p = ValidateBio(p, BioMode::kRepair).sentence;
    XLP_ASSIGN_OR_RETURN(auto gc, ExtractChunks(g, s));
    XLP_ASSIGN_OR_RETURN(auto pc, ExtractChunks(p, s));
    gold_chunks += gc.size();
    pred_chunks += pc.size();
    for (const EntityChunk& a : gc) {
      for (const EntityChunk& b : pc) {
        if (a.span == b.span && a.label == b.label) {
          ++matched;
          break;
        }
      }
    }
  }
  report.entity_f1 =
      gold_chunks + pred_chunks == 0
          ? 1.0
          : 2.0 * static_cast<double>(matched) / (gold_chunks + pred_chunks);
  return report;
}

absl::StatusOr<std::vector<int>> ParseIndexPredictions(std::string_view text) {
  std::vector<int> out;
  std::size_t line_no = 0;
  for (std::string_view line : StrSplit(text, '\n')) {
    ++line_no;
    line = StripAsciiWhitespace(line);
    if (line.empty()) continue;
    int value = 0;
    if (!ParseNumber(line, &value)) {
      return absl::InvalidArgumentError(
          StrCat("line ", line_no, ": not an integer: '", line, "'"));
    }
    out.push_back(value);
  }
  return out;
}

absl::StatusOr<ScoreReport> ScoreTitle(const TitleDataset& gold,
                                       std::span<const int> predictions) {
  if (predictions.size() != gold.examples.size()) {
    return absl::InvalidArgumentError(
        StrCat("gold has ", gold.examples.size(),
                     " examples, prediction has ", predictions.size()));
  }
  ScoreReport report;
  report.task = Task::kTitle;
  report.n_items = predictions.size();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] < 0 ||
        predictions[i] >= static_cast<int>(kTitleCandidates)) {
      return absl::InvalidArgumentError(StrCat(
          "prediction ", i + 1, " is ", predictions[i], ", want 0..3"));
    }
    if (predictions[i] == gold.examples[i].answer_index) ++correct;
  }
  report.accuracy = predictions.empty()
                        ? 0.0
                        : static_cast<double>(correct) / predictions.size();
  return report;
}

absl::StatusOr<ScoreReport> AverageRuns(std::span<const ScoreReport> reports) {
  if (reports.empty()) {
    return absl::InvalidArgumentError("average needs at least one report");
  }
  ScoreReport avg = reports[0];
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const ScoreReport& r = reports[i];
    if (r.task != avg.task) {
      return absl::InvalidArgumentError("cannot average different tasks");
    }
    if (r.n_items != avg.n_items) {
      return absl::InvalidArgumentError(StrCat(
          "run ", i, " scores ", r.n_items, " items, run 0 scores ",
          avg.n_items));
    }
    if (r.per_class_f1.size() != avg.per_class_f1.size() ||
        !std::equal(r.per_class_f1.begin(), r.per_class_f1.end(),
                    avg.per_class_f1.begin(),
                    [](const auto& a, const auto& b) {
                      return a.first == b.first;
                    })) {
      return absl::InvalidArgumentError(
          StrCat("run ", i, " has a different label set"));
    }
  }
  // Sorted summation keeps the mean independent of argument order.
  auto mean_of = [&](auto field) {
    std::vector<double> values;
    for (const ScoreReport& r : reports) values.push_back(field(r));
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
  };
  avg.macro_f1 = mean_of([](const ScoreReport& r) { return r.macro_f1; });
  avg.entity_f1 = mean_of([](const ScoreReport& r) { return r.entity_f1; });
  avg.accuracy = mean_of([](const ScoreReport& r) { return r.accuracy; });
  for (auto& [label, value] : avg.per_class_f1) {
    value = mean_of([&label](const ScoreReport& r) {
      return r.per_class_f1.at(label);
    });
  }
  return avg;
}

absl::StatusOr<std::vector<DeltaRow>> DeltaOverlapReport(
    const std::map<std::string, double>& overlap_percent,
    const std::map<std::string, double>& base,
    const std::map<std::string, double>& perturbed) {
  std::vector<DeltaRow> rows;
  std::set<std::string> keys;
  for (const auto& m : {&overlap_percent, &base, &perturbed}) {
    for (const auto& [k, v] : *m) keys.insert(k);
  }
  for (const std::string& pair : keys) {
    auto o = overlap_percent.find(pair);
    auto b = base.find(pair);
    auto p = perturbed.find(pair);
    if (o == overlap_percent.end()) {
      return absl::NotFoundError(StrCat("no overlap for pair ", pair));
    }
    if (b == base.end()) {
      return absl::NotFoundError(StrCat("no base score for pair ", pair));
    }
    if (p == perturbed.end()) {
      return absl::NotFoundError(
          StrCat("no perturbed score for pair ", pair));
    }
    rows.push_back({pair, o->second, p->second - b->second});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const DeltaRow& a, const DeltaRow& b) {
                     return a.overlap_percent < b.overlap_percent;
                   });
  return rows;
}

std::string FormatDeltaCsv(const std::vector<DeltaRow>& rows) {
  std::string out = "pair,overlap_percent,delta_f1\n";
  for (const DeltaRow& r : rows) {
    // Inputs carry at most a few decimals; round away binary noise.
    const double delta = std::round(r.delta * 1e6) / 1e6;
    StrAppend(&out, r.pair, ",", FormatNumber(r.overlap_percent), ",",
                    FormatNumber(delta == 0.0 ? 0.0 : delta), "\n");
  }
  return out;
}

absl::StatusOr<std::vector<ResultsRow>> ParseResultsCsv(std::string_view text) {
  std::vector<std::string_view> lines = StrSplit(text, '\n');
  std::vector<std::string> header;
  std::vector<ResultsRow> rows;
  static constexpr std::string_view kRules[] = {"p1", "p2", "p3", "p4", "p5"};
  std::size_t line_no = 0;
  for (std::string_view line : lines) {
    ++line_no;
    line = StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    for (std::string_view c : StrSplit(line, ',')) {
      cells.emplace_back(StripAsciiWhitespace(c));
    }
    if (header.empty()) {
      header = std::move(cells);
      for (const char* required : {"pair", "condition", "base"}) {
        if (std::find(header.begin(), header.end(), required) ==
            header.end()) {
          return absl::InvalidArgumentError(
              StrCat("results header lacks column '", required, "'"));
        }
      }
      continue;
    }
    if (cells.size() != header.size()) {
      return absl::InvalidArgumentError(StrCat(
          "line ", line_no, ": ", cells.size(), " cells, header has ",
          header.size()));
    }
    ResultsRow row;
    row.model = "-";
    row.task = "ner";
    for (std::size_t c = 0; c < header.size(); ++c) {
      const std::string& col = header[c];
      const std::string& cell = cells[c];
      auto number = [&]() -> absl::StatusOr<double> {
        double v = 0;
        if (!ParseNumber(cell, &v) || !std::isfinite(v)) {
          return absl::InvalidArgumentError(StrCat(
              "line ", line_no, ": column ", col, ": bad number '", cell, "'"));
        }
        return v;
      };
      if (col == "model") {
        row.model = cell;
      } else if (col == "task") {
        row.task = cell;
      } else if (col == "pair") {
        row.pair = cell;
      } else if (col == "condition") {
        row.condition = cell;
      } else if (col == "base") {
        XLP_ASSIGN_OR_RETURN(row.base, number());
      } else if (std::find(std::begin(kRules), std::end(kRules), col) !=
                 std::end(kRules)) {
        if (cell.empty() || cell == "-") continue;
        XLP_ASSIGN_OR_RETURN(row.perturbed[col], number());
      }
    }
    if (row.pair.empty() || row.condition.empty()) {
      return absl::InvalidArgumentError(
          StrCat("line ", line_no, ": empty pair or condition"));
    }
    rows.push_back(std::move(row));
  }
  if (header.empty()) return absl::InvalidArgumentError("empty results CSV");
  return rows;
}

absl::StatusOr<std::vector<SignificanceRow>> SignificanceTable(
    const std::vector<ResultsRow>& rows) {
  using GroupKey = std::tuple<std::string, std::string, std::string>;
  std::vector<GroupKey> order;
  std::map<GroupKey, std::vector<const ResultsRow*>> groups;
  for (const ResultsRow& r : rows) {
    GroupKey key{r.model, r.task, r.condition};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  std::vector<SignificanceRow> out;
  for (const GroupKey& key : order) {
    const auto& members = groups[key];
    for (std::string rule : {"p1", "p2", "p3", "p4", "p5"}) {
      std::vector<double> base, perturbed;
      for (const ResultsRow* r : members) {
        auto it = r->perturbed.find(rule);
        if (it == r->perturbed.end()) continue;
        base.push_back(r->base);
        perturbed.push_back(it->second);
      }
      if (base.empty()) continue;
      auto test = PairedTTest(base, perturbed);
      if (!test.ok()) {
        return absl::Status(
            test.status().code(),
            StrCat(std::get<0>(key), "/", std::get<1>(key), "/",
                         std::get<2>(key), "/", rule, ": ",
                         test.status().message()));
      }
      out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key),
                     rule, base.size(), *test});
    }
  }
  return out;
}

std::string FormatPValue(double p) {
  if (p < 1e-4) return "p < 0.0001";
  return StrFormat("p = %.4f", p);
}

std::string FormatSignificanceCsv(const std::vector<SignificanceRow>& rows) {
  std::string out =
      "model,task,condition,rule,n,mean_delta,t,df,p_value,p_display\n";
  for (const SignificanceRow& r : rows) {
    StrAppend(&out, r.model, ",", r.task, ",", r.condition, ",", r.rule,
                    ",", r.n, ",", StrFormat("%.4f", r.test.mean_delta),
                    ",", StrFormat("%.4f", r.test.t_statistic), ",",
                    r.test.degrees_of_freedom, ",",
                    StrFormat("%.6g", r.test.p_value), ",",
                    FormatPValue(r.test.p_value), "\n");
  }
  return out;
}

}  // namespace xlp
