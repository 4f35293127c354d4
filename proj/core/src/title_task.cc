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

#include "xlp/title_task.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "absl/container/flat_hash_map.h"
#include "absl/container/flat_hash_set.h"
#include "json.hpp"
#include "xlp/file_util.h"
#include "xlp/status_macros.h"
#include "xlp/text.h"
#include "str_util.h"

namespace xlp {
namespace {

using json = nlohmann::json;

std::string CollapseWhitespace(std::string_view s) {
  std::string out;
  for (const std::string& w : SplitWhitespace(s)) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

// Removes every balanced `open`...`close` region, innermost first.
std::string RemoveDelimited(std::string s, std::string_view open,
                            std::string_view close) {
  while (true) {
    std::size_t end = s.find(close);
    if (end == std::string::npos) break;
    std::size_t start = s.rfind(open, end);
    if (start == std::string::npos) break;
    s.erase(start, end + close.size() - start);
  }
  return s;
}

absl::StatusOr<Section> ParseSectionRecord(const json& j,
                                           const std::string& page_id,
                                           const std::string& page_title) {
  if (!j.is_object() || !j.contains("heading") || !j["heading"].is_string() ||
      !j.contains("body") || !j["body"].is_string() || !j.contains("level") ||
      !j["level"].is_number_integer()) {
    return absl::InvalidArgumentError(
        "section needs integer level, string heading and string body");
  }
  Section s;
  s.page_id = page_id;
  s.page_title = page_title;
  s.level = j["level"].get<int>();
  s.title = StripHeadingMarkup(j["heading"].get<std::string>());
  s.text = j["body"].get<std::string>();
  return s;
}

bool IsBlankText(std::string_view s) { return SplitWhitespace(s).empty(); }

json ExampleToJson(const TitleExample& ex) {
  return json{{"text", ex.text},
              {"candidates", json(ex.candidates)},
              {"answer_index", ex.answer_index},
              {"page_id", ex.page_id}};
}

absl::Status LineError(std::size_t line, std::string_view what) {
  return absl::InvalidArgumentError(StrCat("line ", line, ": ", what));
}

}  // namespace

absl::Status ValidateExample(const TitleExample& ex) {
  if (ex.answer_index < 0 ||
      ex.answer_index >= static_cast<int>(kTitleCandidates)) {
    return absl::InvalidArgumentError(
        StrCat("answer_index ", ex.answer_index, " out of range"));
  }
  for (std::size_t i = 0; i < kTitleCandidates; ++i) {
    if (ex.candidates[i].empty()) {
      return absl::InvalidArgumentError("empty candidate title");
    }
    for (std::size_t j = i + 1; j < kTitleCandidates; ++j) {
      if (ex.candidates[i] == ex.candidates[j]) {
        return absl::InvalidArgumentError(
            StrCat("duplicate candidate '", ex.candidates[i], "'"));
      }
    }
  }
  if (ex.text.empty()) return absl::InvalidArgumentError("empty section text");
  return absl::OkStatus();
}

std::string StripHeadingMarkup(std::string_view heading) {
  std::string s(heading);
  s = RemoveDelimited(std::move(s), "{{", "}}");
  s = RemoveDelimited(std::move(s), "<!--", "-->");
  // [[target|label]] -> label, [[target]] -> target.
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, 2, "[[") == 0) {
      std::size_t end = s.find("]]", i + 2);
      if (end != std::string::npos) {
        std::string_view inner(s.data() + i + 2, end - i - 2);
        std::size_t bar = inner.rfind('|');
        out.append(bar == inner.npos ? inner : inner.substr(bar + 1));
        i = end + 2;
        continue;
      }
    }
    if (s[i] == '<') {
      std::size_t end = s.find('>', i);
      if (end != std::string::npos) {
        i = end + 1;
        continue;
      }
    }
    if (s.compare(i, 2, "''") == 0) {
      while (i < s.size() && s[i] == '\'') ++i;
      continue;
    }
    out.push_back(s[i]);
    ++i;
  }
  std::string_view trimmed = out;
  while (!trimmed.empty() && (trimmed.front() == '=' || trimmed.front() == ' '))
    trimmed.remove_prefix(1);
  while (!trimmed.empty() && (trimmed.back() == '=' || trimmed.back() == ' '))
    trimmed.remove_suffix(1);
  return CollapseWhitespace(trimmed);
}

std::vector<Page> ExtractSections(std::istream& input, ExtractionStats* stats) {
  ExtractionStats local;
  ExtractionStats& st = stats != nullptr ? *stats : local;
  std::vector<Page> pages;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    if (IsBlankText(line)) continue;
    ++st.records;
    json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("title") ||
        !doc["title"].is_string() || !doc.contains("sections") ||
        !doc["sections"].is_array()) {
      ++st.malformed;
      st.warnings.push_back(
          StrCat("line ", line_no, ": malformed article record"));
      continue;
    }
    Page page;
    page.page_title = doc["title"].get<std::string>();
    if (doc.contains("id") && doc["id"].is_string()) {
      page.page_id = doc["id"].get<std::string>();
    } else if (doc.contains("id") && doc["id"].is_number_integer()) {
      page.page_id = std::to_string(doc["id"].get<long long>());
    } else {
      page.page_id = page.page_title;
    }
    bool bad = false;
    for (const json& js : doc["sections"]) {
      auto section = ParseSectionRecord(js, page.page_id, page.page_title);
      if (!section.ok()) {
        bad = true;
        st.warnings.push_back(StrCat("line ", line_no, ": ",
                                           section.status().message()));
        break;
      }
      if (section->level != 2 && section->level != 3) continue;
      if (section->title.empty() || IsBlankText(section->text)) continue;
      page.sections.push_back(*std::move(section));
    }
    if (bad) {
      ++st.malformed;
      continue;
    }
    if (page.sections.size() < kMinSectionsPerPage) {
      ++st.pages_too_small;
      continue;
    }
    ++st.pages_kept;
    pages.push_back(std::move(page));
  }
  return pages;
}

TitleDataset BuildExamples(const std::vector<Page>& pages,
                           std::string_view language, const Rng& rng,
                           std::size_t cap, BuildStats* stats) {
  BuildStats local;
  BuildStats& st = stats != nullptr ? *stats : local;
  TitleDataset dataset;
  dataset.language = std::string(language);
  const Rng page_streams = rng.Fork("build-examples");
  for (std::size_t p = 0; p < pages.size(); ++p) {
    const Page& page = pages[p];
    std::vector<std::string> titles;
    absl::flat_hash_set<std::string> seen;
    for (const Section& s : page.sections) {
      if (seen.insert(s.title).second) titles.push_back(s.title);
    }
    if (titles.size() < kTitleCandidates) {
      ++st.pages_skipped_few_titles;
      st.sections_skipped += page.sections.size();
      continue;
    }
    Rng page_rng = page_streams.Fork(p);
    for (const Section& s : page.sections) {
      std::vector<const std::string*> others;
      for (const std::string& t : titles) {
        if (t != s.title) others.push_back(&t);
      }
      std::vector<std::size_t> picks =
          page_rng.SampleWithoutReplacement(others.size(),
                                            kTitleCandidates - 1);
      TitleExample ex;
      ex.text = s.text;
      ex.page_id = page.page_id;
      ex.answer_index = static_cast<int>(page_rng.Uniform(kTitleCandidates));
      std::size_t next = 0;
      for (std::size_t slot = 0; slot < kTitleCandidates; ++slot) {
        ex.candidates[slot] = static_cast<int>(slot) == ex.answer_index
                                  ? s.title
                                  : *others[picks[next++]];
      }
      dataset.examples.push_back(std::move(ex));
    }
  }
  st.candidate_examples = dataset.examples.size();
  Rng shuffle_rng = rng.Fork("shuffle");
  shuffle_rng.Shuffle(dataset.examples);
  if (dataset.examples.size() > cap) dataset.examples.resize(cap);
  return dataset;
}

std::pair<TitleDataset, TitleDataset> SplitDataset(
    const TitleDataset& dataset, const Rng& rng, const SplitOptions& options) {
  const std::size_t n = dataset.examples.size();
  const std::size_t target = static_cast<std::size_t>(
      std::floor(options.train_ratio * static_cast<double>(n)));
  TitleDataset train{dataset.language, {}};
  TitleDataset test{dataset.language, {}};
  Rng split_rng = rng.Fork("split");

  if (!options.group_by_page) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    split_rng.Shuffle(order);
    for (std::size_t i = 0; i < n; ++i) {
      (i < target ? train : test).examples.push_back(
          dataset.examples[order[i]]);
    }
    return {std::move(train), std::move(test)};
  }

  std::vector<std::string> page_order;
  absl::flat_hash_map<std::string, std::vector<std::size_t>> by_page;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = by_page.try_emplace(dataset.examples[i].page_id);
    if (inserted) page_order.push_back(dataset.examples[i].page_id);
    it->second.push_back(i);
  }
  split_rng.Shuffle(page_order);
  for (const std::string& page : page_order) {
    TitleDataset& side = train.examples.size() < target ? train : test;
    for (std::size_t i : by_page[page]) {
      side.examples.push_back(dataset.examples[i]);
    }
  }
  return {std::move(train), std::move(test)};
}

std::string SerializeTitleDataset(const TitleDataset& dataset) {
  std::string out;
  for (const TitleExample& ex : dataset.examples) {
    out += ExampleToJson(ex).dump(-1, ' ', false,
                                  json::error_handler_t::replace);
    out.push_back('\n');
  }
  return out;
}

absl::StatusOr<TitleDataset> ParseTitleDataset(std::string_view text,
                                               std::string_view language) {
  TitleDataset dataset;
  dataset.language = std::string(language);
  std::size_t line_no = 0;
  for (std::string_view line : StrSplit(text, '\n')) {
    ++line_no;
    line = StripSuffix(line, "\r");
    if (IsBlankText(line)) continue;
    json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) {
      return LineError(line_no, "not a JSON object");
    }
    if (!doc.contains("text") || !doc["text"].is_string()) {
      return LineError(line_no, "missing string field 'text'");
    }
    if (!doc.contains("candidates") || !doc["candidates"].is_array()) {
      return LineError(line_no, "missing array field 'candidates'");
    }
    if (!doc.contains("answer_index") ||
        !doc["answer_index"].is_number_integer()) {
      return LineError(line_no, "missing integer field 'answer_index'");
    }
    if (!doc.contains("page_id") || !doc["page_id"].is_string()) {
      return LineError(line_no, "missing string field 'page_id'");
    }
    const json& cands = doc["candidates"];
    if (cands.size() != kTitleCandidates) {
      return LineError(line_no, StrCat("expected ", kTitleCandidates,
                                             " candidates, got ",
                                             cands.size()));
    }
    TitleExample ex;
    ex.text = doc["text"].get<std::string>();
    ex.page_id = doc["page_id"].get<std::string>();
    ex.answer_index = doc["answer_index"].get<int>();
    for (std::size_t i = 0; i < kTitleCandidates; ++i) {
      if (!cands[i].is_string()) {
        return LineError(line_no, "candidate is not a string");
      }
      ex.candidates[i] = cands[i].get<std::string>();
    }
    if (absl::Status s = ValidateExample(ex); !s.ok()) {
      return LineError(line_no, std::string(s.message()));
    }
    dataset.examples.push_back(std::move(ex));
  }
  return dataset;
}

absl::StatusOr<TitleDataset> LoadTitleDataset(const std::string& path,
                                              std::string_view language) {
  XLP_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  auto dataset = ParseTitleDataset(text, language);
  if (!dataset.ok()) {
    return absl::Status(dataset.status().code(),
                        StrCat(path, ": ", dataset.status().message()));
  }
  return dataset;
}

absl::Status SaveTitleDataset(const TitleDataset& dataset,
                              const std::string& path) {
  return WriteFileAtomically(path, SerializeTitleDataset(dataset));
}

}  // namespace xlp
