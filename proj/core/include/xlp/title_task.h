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

#ifndef XLP_TITLE_TASK_H_
#define XLP_TITLE_TASK_H_

#include <array>
#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "xlp/rng.h"

namespace xlp {

inline constexpr std::size_t kTitleCandidates = 4;
inline constexpr std::size_t kMinSectionsPerPage = 4;
inline constexpr std::size_t kDefaultTitleCap = 100000;

struct Section {
  std::string page_id;
  std::string page_title;
  int level = 2;
  std::string title;
  std::string text;
};

struct Page {
  std::string page_id;
  std::string page_title;
  std::vector<Section> sections;
};

struct TitleExample {
  std::string text;
  std::array<std::string, kTitleCandidates> candidates;
  int answer_index = 0;
  std::string page_id;

  friend bool operator==(const TitleExample&, const TitleExample&) = default;
};

struct TitleDataset {
  std::string language;
  std::vector<TitleExample> examples;

  friend bool operator==(const TitleDataset&, const TitleDataset&) = default;
};

// Checks candidate distinctness and answer range.
absl::Status ValidateExample(const TitleExample& example);

// Removes bold/italic quotes, [[link|label]] targets, {{templates}}, HTML
// tags and surrounding '=' from a heading; collapses whitespace.
std::string StripHeadingMarkup(std::string_view heading);

struct ExtractionStats {
  std::size_t records = 0;
  std::size_t malformed = 0;
  std::size_t pages_kept = 0;
  std::size_t pages_too_small = 0;
  std::vector<std::string> warnings;
};

// Reads JSON-lines article records
//   {"id": ..., "title": "...", "sections": [{"level": 2, "heading": "...",
//    "body": "..."}, ...]}
// keeping level 2/3 sections with nonempty bodies and titles, and only pages
// left with at least four such sections. Malformed lines are skipped.
std::vector<Page> ExtractSections(std::istream& input, ExtractionStats* stats);

struct BuildStats {
  std::size_t candidate_examples = 0;
  std::size_t pages_skipped_few_titles = 0;
  std::size_t sections_skipped = 0;
};

// One example per section with three distractors drawn without replacement
// from the page's other distinct titles. All candidates are shuffled with a
// seed-determined order and the first `cap` kept.
TitleDataset BuildExamples(const std::vector<Page>& pages,
                           std::string_view language, const Rng& rng,
                           std::size_t cap = kDefaultTitleCap,
                           BuildStats* stats = nullptr);

struct SplitOptions {
  double train_ratio = 0.8;
  // Keeps every page's examples on one side of the split.
  bool group_by_page = false;
};

std::pair<TitleDataset, TitleDataset> SplitDataset(
    const TitleDataset& dataset, const Rng& rng,
    const SplitOptions& options = {});

// JSON-lines: {"answer_index":k,"candidates":[4],"page_id":"...","text":"..."}
std::string SerializeTitleDataset(const TitleDataset& dataset);
absl::StatusOr<TitleDataset> ParseTitleDataset(std::string_view text,
                                               std::string_view language);
absl::StatusOr<TitleDataset> LoadTitleDataset(const std::string& path,
                                              std::string_view language);
absl::Status SaveTitleDataset(const TitleDataset& dataset,
                              const std::string& path);

}  // namespace xlp

#endif  // XLP_TITLE_TASK_H_
