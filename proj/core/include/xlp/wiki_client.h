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

#ifndef XLP_WIKI_CLIENT_H_
#define XLP_WIKI_CLIENT_H_

#include <chrono>
#include <cstddef>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "xlp/lexicon.h"

namespace xlp {

// Spaces requests to at most `requests_per_second`. Shared across fetches
// running on different threads.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_second);

  void Acquire();

 private:
  std::mutex mu_;
  std::chrono::steady_clock::duration interval_;
  std::chrono::steady_clock::time_point next_;
};

struct CategoryFetchOptions {
  // MediaWiki api.php URL, e.g. "https://en.wiktionary.org/w/api.php".
  std::string endpoint = "https://en.wiktionary.org/w/api.php";
  // Category title templates. "{lang}" expands to the ISO code and
  // "{name}" to the English language name ("Breton").
  std::string given_names_template = "Category:{name} given names";
  std::string places_template = "Category:{lang}:Places";
  // Maximum number of API result pages to request.
  std::size_t page_limit = 1000;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  // When set, raw responses are cached here, keyed by endpoint, category,
  // snapshot label and continuation token.
  std::string cache_dir;
  std::string snapshot = "live";
  RateLimiter* rate_limiter = nullptr;
  std::chrono::seconds timeout{30};
};

// Category title for `language` and `kind` under the configured template.
absl::StatusOr<std::string> CategoryTitle(std::string_view language,
                                          LexiconKind kind,
                                          const CategoryFetchOptions& options);

// English name used by Wiktionary for an ISO 639 code, if known.
std::optional<std::string_view> LanguageName(std::string_view code);

// Entry text for a category member title: drops any namespace prefix and a
// trailing parenthetical ("Paris (Texas)" -> "Paris").
std::string CleanMemberTitle(std::string_view title, int ns);

struct CategoryFetchResult {
  Lexicon lexicon;
  std::size_t pages_requested = 0;
  std::size_t titles_seen = 0;
  std::vector<std::string> warnings;
};

// Walks list=categorymembers, following cmcontinue until exhausted or
// page_limit pages were read. HTTP failures are retried with exponential
// backoff and reported as kUnavailable once attempts run out; an unparseable
// body is kDataLoss.
absl::StatusOr<CategoryFetchResult> FetchCategory(
    std::string_view language, LexiconKind kind,
    const CategoryFetchOptions& options);

}  // namespace xlp

#endif  // XLP_WIKI_CLIENT_H_
