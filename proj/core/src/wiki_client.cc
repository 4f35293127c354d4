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

#include "xlp/wiki_client.h"

#include <array>
#include <filesystem>
#include <thread>
#include <utility>

#include "httplib.h"
#include "json.hpp"
#include "xlp/file_util.h"
#include "xlp/status_macros.h"
#include "str_util.h"

namespace xlp {
namespace {

using json = nlohmann::json;

constexpr std::array<std::pair<std::string_view, std::string_view>, 26>
    kLanguageNames = {{
        {"af", "Afrikaans"}, {"an", "Aragonese"}, {"ar", "Arabic"},
        {"ast", "Asturian"}, {"br", "Breton"},    {"ca", "Catalan"},
        {"cs", "Czech"},     {"cy", "Welsh"},     {"de", "German"},
        {"en", "English"},   {"es", "Spanish"},   {"fa", "Persian"},
        {"fr", "French"},    {"hi", "Hindi"},     {"id", "Indonesian"},
        {"it", "Italian"},   {"ms", "Malay"},     {"nl", "Dutch"},
        {"oc", "Occitan"},   {"pt", "Portuguese"}, {"ru", "Russian"},
        {"sco", "Scots"},    {"scn", "Sicilian"}, {"sk", "Slovak"},
        {"ur", "Urdu"},      {"zh", "Chinese"},
    }};

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

absl::StatusOr<Endpoint> SplitEndpoint(std::string_view url) {
  std::size_t scheme_end = url.find("://");
  if (scheme_end == url.npos) {
    return absl::InvalidArgumentError(
        StrCat("endpoint is not an absolute URL: ", url));
  }
  std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == url.npos) return Endpoint{std::string(url), "/"};
  return Endpoint{std::string(url.substr(0, path_start)),
                  std::string(url.substr(path_start))};
}

std::string CacheKey(const CategoryFetchOptions& options,
                     std::string_view category, std::string_view cont) {
  return Sha256Hex(StrCat(options.endpoint, "\n", category, "\n",
                                options.snapshot, "\n", cont));
}

// Returns the raw body for one categorymembers page.
absl::StatusOr<std::string> GetPage(const CategoryFetchOptions& options,
                                    const Endpoint& endpoint,
                                    std::string_view category,
                                    std::string_view cont) {
  std::filesystem::path cache_file;
  if (!options.cache_dir.empty()) {
    cache_file = std::filesystem::path(options.cache_dir) /
                 (CacheKey(options, category, cont) + ".json");
    if (std::filesystem::exists(cache_file)) return ReadFile(cache_file);
  }

  httplib::Params params{{"action", "query"},
                         {"list", "categorymembers"},
                         {"cmtitle", std::string(category)},
                         {"cmlimit", "500"},
                         {"format", "json"},
                         {"formatversion", "2"}};
  if (!cont.empty()) params.emplace("cmcontinue", std::string(cont));
  const std::string target =
      httplib::append_query_params(endpoint.path, params);

  httplib::Client client(endpoint.origin);
  client.set_connection_timeout(options.timeout);
  client.set_read_timeout(options.timeout);
  client.set_follow_location(true);

  std::string last_error;
  auto backoff = options.initial_backoff;
  const int attempts = std::max(1, options.max_attempts);
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    if (options.rate_limiter != nullptr) options.rate_limiter->Acquire();
    httplib::Result result =
        client.Get(target, {{"User-Agent", "xlp-lexicon-fetch/0.1"}});
    if (result && result->status == 200) {
      if (!cache_file.empty()) {
        std::filesystem::create_directories(options.cache_dir);
        XLP_RETURN_IF_ERROR(WriteFileAtomically(cache_file, result->body));
      }
      return std::move(result->body);
    }
    last_error = result ? StrCat("HTTP ", result->status)
                        : httplib::to_string(result.error());
    if (attempt < attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  return absl::UnavailableError(
      StrCat("categorymembers request for '", category, "' failed after ",
                   attempts, " attempts: ", last_error));
}

}  // namespace

RateLimiter::RateLimiter(double requests_per_second)
    : interval_(std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(
              requests_per_second > 0 ? 1.0 / requests_per_second : 0.0))),
      next_(std::chrono::steady_clock::now()) {}

void RateLimiter::Acquire() {
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_);
    next_ = slot + interval_;
  }
  std::this_thread::sleep_until(slot);
}

std::optional<std::string_view> LanguageName(std::string_view code) {
  for (const auto& [c, name] : kLanguageNames) {
    if (c == code) return name;
  }
  return std::nullopt;
}

absl::StatusOr<std::string> CategoryTitle(std::string_view language,
                                          LexiconKind kind,
                                          const CategoryFetchOptions& options) {
  const std::string& tmpl = kind == LexiconKind::kGivenNames
                                ? options.given_names_template
                                : options.places_template;
  std::vector<std::pair<std::string_view, std::string_view>> replacements = {
      {"{lang}", language}};
  if (tmpl.find("{name}") != std::string::npos) {
    auto name = LanguageName(language);
    if (!name) {
      return absl::InvalidArgumentError(StrCat(
          "no language name known for '", language,
          "'; use a template with {lang} only"));
    }
    replacements.emplace_back("{name}", *name);
  }
  std::string out = tmpl;
  for (const auto& [from, to] : replacements) {
    for (std::size_t pos = out.find(from); pos != std::string::npos;
         pos = out.find(from, pos + to.size())) {
      out.replace(pos, from.size(), to);
    }
  }
  return out;
}

std::string CleanMemberTitle(std::string_view title, int ns) {
  if (ns != 0) {
    std::size_t colon = title.find(':');
    if (colon != title.npos) title.remove_prefix(colon + 1);
  }
  while (!title.empty() && title.back() == ' ') title.remove_suffix(1);
  if (!title.empty() && title.back() == ')') {
    std::size_t open = title.rfind(" (");
    if (open != title.npos && open > 0) title = title.substr(0, open);
  }
  while (!title.empty() && title.front() == ' ') title.remove_prefix(1);
  while (!title.empty() && title.back() == ' ') title.remove_suffix(1);
  return std::string(title);
}

absl::StatusOr<CategoryFetchResult> FetchCategory(
    std::string_view language, LexiconKind kind,
    const CategoryFetchOptions& options) {
  XLP_ASSIGN_OR_RETURN(std::string category,
                       CategoryTitle(language, kind, options));
  XLP_ASSIGN_OR_RETURN(Endpoint endpoint, SplitEndpoint(options.endpoint));

  CategoryFetchResult result{Lexicon(std::string(language), kind), 0, 0, {}};
  std::vector<std::string> entries;
  std::string cont;
  while (result.pages_requested < options.page_limit) {
    XLP_ASSIGN_OR_RETURN(std::string body,
                         GetPage(options, endpoint, category, cont));
    ++result.pages_requested;
    json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) {
      return absl::DataLossError(
          StrCat("malformed API response for '", category, "'"));
    }
    if (doc.contains("error")) {
      return absl::DataLossError(StrCat(
          "API error for '", category, "': ", doc["error"].dump()));
    }
    auto query = doc.find("query");
    if (query == doc.end() || !query->is_object() ||
        !query->contains("categorymembers") ||
        !(*query)["categorymembers"].is_array()) {
      return absl::DataLossError(StrCat(
          "API response for '", category, "' has no query.categorymembers"));
    }
    for (const json& member : (*query)["categorymembers"]) {
      if (!member.is_object() || !member.contains("title") ||
          !member["title"].is_string()) {
        return absl::DataLossError(
            StrCat("category member without title in '", category, "'"));
      }
      int ns = member.value("ns", 0);
      // Subcategories are containers, not entries.
      if (ns == 14) continue;
      ++result.titles_seen;
      entries.push_back(
          CleanMemberTitle(member["title"].get<std::string>(), ns));
    }
    auto next = doc.find("continue");
    if (next == doc.end() || !next->contains("cmcontinue")) break;
    if (!(*next)["cmcontinue"].is_string()) {
      return absl::DataLossError(
          StrCat("non-string cmcontinue for '", category, "'"));
    }
    cont = (*next)["cmcontinue"].get<std::string>();
  }
  if (entries.empty()) {
    result.warnings.push_back(StrCat(
        "category '", category, "' returned no members; empty lexicon"));
  }
  result.lexicon = Lexicon(std::string(language), kind, std::move(entries));
  return result;
}

}  // namespace xlp
