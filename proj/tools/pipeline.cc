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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cli.h"
#include "cli_common.h"
#include "fmt/format.h"
#include "json.hpp"
#include "xlp/file_util.h"
#include "xlp/overlap.h"
#include "xlp/perturb.h"
#include "xlp/status_macros.h"

namespace xlp::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

const std::set<std::string>& PathKeys() {
  static const std::set<std::string> keys = {
      "l1_train",  "l2_test",   "given_names", "places",
      "embeddings", "stopwords", "l1_titles",  "l2_titles",
      "tokens",    "out_dir"};
  return keys;
}

const std::set<std::string>& OtherKeys() {
  static const std::set<std::string> keys = {
      "seed", "l1", "l2", "mode", "rules", "redraw_per_occurrence",
      "threads", "strip_language_prefix"};
  return keys;
}

struct Config {
  std::map<std::string, std::string> values;

  const std::string& Get(const std::string& key) const {
    static const std::string kEmpty;
    auto it = values.find(key);
    return it == values.end() ? kEmpty : it->second;
  }
};

// "key = value" lines; '#' starts a comment line. Relative paths resolve
// against the config file's directory.
absl::StatusOr<Config> ParseConfig(std::string_view text,
                                   const fs::path& base) {
  Config config;
  std::istringstream lines{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const char* ws = " \t\r";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
  };
  while (std::getline(lines, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      return absl::InvalidArgumentError(
          fmt::format("line {}: expected 'key = value'", line_no));
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!PathKeys().contains(key) && !OtherKeys().contains(key)) {
      return absl::InvalidArgumentError(
          fmt::format("line {}: unknown key '{}'", line_no, key));
    }
    if (config.values.contains(key)) {
      return absl::InvalidArgumentError(
          fmt::format("line {}: duplicate key '{}'", line_no, key));
    }
    if (PathKeys().contains(key) && !value.empty()) {
      fs::path p(value);
      if (p.is_relative()) p = base / p;
      value = p.lexically_normal().string();
    }
    config.values[key] = value;
  }
  for (const char* required : {"seed", "l1", "l2", "l1_train", "l2_test"}) {
    if (config.Get(required).empty()) {
      return absl::InvalidArgumentError(
          fmt::format("missing required key '{}'", required));
    }
  }
  return config;
}

bool Truthy(const std::string& value) {
  return value == "1" || value == "true" || value == "yes";
}

class Pipeline {
 public:
  Pipeline(Config config, std::ostream& log)
      : config_(std::move(config)),
        resources_(Truthy(config_.Get("strip_language_prefix")), log),
        log_(log) {}

  // Returns the failing stage name with the error.
  absl::Status Run(std::string* failed_stage);

 private:
  absl::Status RunStage(const std::string& stage,
                        const std::function<absl::Status()>& body,
                        std::string* failed_stage) {
    absl::Status s = body();
    if (!s.ok()) *failed_stage = stage;
    return s;
  }

  absl::Status Write(const std::string& stage, const std::string& name,
                     const std::string& text) {
    const fs::path path = out_dir_ / name;
    XLP_RETURN_IF_ERROR(WriteFileAtomically(path, text));
    outputs_.push_back(
        {{"stage", stage}, {"file", name}, {"sha256", Sha256Hex(text)}});
    log_ << "wrote " << path.string() << "\n";
    return absl::OkStatus();
  }

  absl::Status OverlapStage();
  absl::Status PerturbStage(Task task, Rule rule, SubstitutionMode mode,
                            const std::string& stage, const std::string& file);

  Config config_;
  Resources resources_;
  std::ostream& log_;
  fs::path out_dir_;
  std::uint64_t seed_ = 0;
  json outputs_ = json::array();
  json overlap_ = json::object();
  json manifests_ = json::object();
};

absl::Status Pipeline::OverlapStage() {
  std::string csv = "task,l1,l2,shared,total,percent\n";
  const std::string& l1 = config_.Get("l1");
  const std::string& l2 = config_.Get("l2");
  auto add_row = [&](const char* task, const OverlapReport& r) {
    csv += fmt::format("{},{},{},{},{},{:.2f}\n", task, l1, l2, r.shared_count,
                       r.total_count, r.percent());
    overlap_[task] = {{"shared", r.shared_count},
                      {"total", r.total_count},
                      {"percent", fmt::format("{:.2f}", r.percent())}};
  };
  XLP_ASSIGN_OR_RETURN(const Corpus* train,
                       resources_.Ner(config_.Get("l1_train"), l1));
  XLP_ASSIGN_OR_RETURN(const Corpus* test,
                       resources_.Ner(config_.Get("l2_test"), l2));
  XLP_ASSIGN_OR_RETURN(OverlapReport ner, NerWordOverlap(*train, *test));
  add_row("ner", ner);
  if (!config_.Get("l1_titles").empty()) {
    XLP_ASSIGN_OR_RETURN(const TitleDataset* t_train,
                         resources_.Titles(config_.Get("l1_titles"), l1));
    XLP_ASSIGN_OR_RETURN(const TitleDataset* t_test,
                         resources_.Titles(config_.Get("l2_titles"), l2));
    XLP_ASSIGN_OR_RETURN(const WordSet* stopwords,
                         resources_.Stopwords(config_.Get("stopwords")));
    XLP_ASSIGN_OR_RETURN(const TitleTruncation* truncation,
                         resources_.Truncation(config_.Get("tokens")));
    XLP_ASSIGN_OR_RETURN(
        OverlapReport title,
        TitleWordOverlap(*t_train, *t_test, *truncation, *stopwords));
    add_row("title", title);
  }
  return Write("overlap", "overlap.csv", csv);
}

absl::Status Pipeline::PerturbStage(Task task, Rule rule,
                                    SubstitutionMode mode,
                                    const std::string& stage,
                                    const std::string& file) {
  PerturbRequest r;
  r.task = task;
  r.rule = rule;
  r.mode = mode;
  r.seed = seed_;
  r.l1_language = config_.Get("l1");
  r.l2_language = config_.Get("l2");
  if (task == Task::kTitle) {
    r.l2_test = config_.Get("l2_titles");
    r.l1_train = config_.Get("l1_titles");
    r.tokens = config_.Get("tokens");
  } else {
    r.l2_test = config_.Get("l2_test");
    if (rule != Rule::kP1 && rule != Rule::kP2) {
      r.l1_train = config_.Get("l1_train");
    }
    if (rule == Rule::kP1) r.lexicon = config_.Get("given_names");
    if (rule == Rule::kP2) r.lexicon = config_.Get("places");
  }
  if (rule == Rule::kP4 || rule == Rule::kP5) {
    r.stopwords = config_.Get("stopwords");
    if (mode == SubstitutionMode::kCosine) {
      r.embeddings = config_.Get("embeddings");
    }
  }
  r.redraw_per_occurrence = Truthy(config_.Get("redraw_per_occurrence"));
  if (const std::string& threads = config_.Get("threads"); !threads.empty()) {
    r.threads = static_cast<unsigned>(std::stoul(threads));
  }
  XLP_ASSIGN_OR_RETURN(PerturbOutput output, RunPerturbation(r, resources_));
  XLP_RETURN_IF_ERROR(Write(stage, file, output.text));
  manifests_[stage] = json::parse(ManifestToJson(output.manifest));
  return absl::OkStatus();
}

absl::Status Pipeline::Run(std::string* failed_stage) {
  *failed_stage = "config";
  try {
    std::size_t used = 0;
    seed_ = std::stoull(config_.Get("seed"), &used);
    if (used != config_.Get("seed").size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    return absl::InvalidArgumentError(
        fmt::format("seed '{}' is not a 64-bit unsigned integer",
                    config_.Get("seed")));
  }
  SubstitutionMode mode = SubstitutionMode::kCosine;
  if (!config_.Get("mode").empty()) {
    XLP_ASSIGN_OR_RETURN(mode, ParseSubstitutionMode(config_.Get("mode")));
  }
  std::vector<Rule> rules;
  {
    std::string list = config_.Get("rules");
    if (list.empty()) list = "p1,p2,p3,p4,p5";
    std::istringstream items(list);
    for (std::string item; std::getline(items, item, ',');) {
      item.erase(0, item.find_first_not_of(' '));
      item.erase(item.find_last_not_of(' ') + 1);
      XLP_ASSIGN_OR_RETURN(Rule rule, ParseRule(item));
      rules.push_back(rule);
    }
  }
  const bool titles = !config_.Get("l1_titles").empty() ||
                      !config_.Get("l2_titles").empty();
  if (titles && (config_.Get("l1_titles").empty() ||
                 config_.Get("l2_titles").empty())) {
    return absl::InvalidArgumentError(
        "l1_titles and l2_titles must be given together");
  }
  out_dir_ = config_.Get("out_dir").empty() ? fs::path("out")
                                            : fs::path(config_.Get("out_dir"));
  std::error_code ec;
  fs::create_directories(out_dir_, ec);
  if (ec) {
    return absl::UnavailableError(fmt::format(
        "cannot create {}: {}", out_dir_.string(), ec.message()));
  }

  XLP_RETURN_IF_ERROR(
      RunStage("overlap", [&] { return OverlapStage(); }, failed_stage));
  for (Rule rule : rules) {
    const std::string name(RuleName(rule));
    XLP_RETURN_IF_ERROR(RunStage(
        "perturb/" + name,
        [&] {
          return PerturbStage(Task::kNer, rule, mode, "perturb/" + name,
                              name + ".conll");
        },
        failed_stage));
  }
  if (titles) {
    for (SubstitutionMode m :
         {SubstitutionMode::kCosine, SubstitutionMode::kRandom}) {
      const std::string suffix(SubstitutionModeName(m));
      const std::string stage = "perturb/title-" + suffix;
      XLP_RETURN_IF_ERROR(RunStage(
          stage,
          [&] {
            return PerturbStage(Task::kTitle, Rule::kP4, m, stage,
                                "title_p4_" + suffix + ".jsonl");
          },
          failed_stage));
    }
  }

  *failed_stage = "summary";
  json summary;
  summary["seed"] = seed_;
  summary["l1"] = config_.Get("l1");
  summary["l2"] = config_.Get("l2");
  summary["mode"] = SubstitutionModeName(mode);
  summary["overlap"] = overlap_;
  summary["outputs"] = outputs_;
  summary["manifests"] = manifests_;
  const std::string text = summary.dump(2) + "\n";
  XLP_RETURN_IF_ERROR(WriteFileAtomically(out_dir_ / "summary.json", text));
  log_ << "wrote " << (out_dir_ / "summary.json").string() << "\n";
  failed_stage->clear();
  return absl::OkStatus();
}

}  // namespace

int RunPipeline(const std::string& config_path, std::ostream& out,
                std::ostream& err) {
  auto text = ReadFile(config_path);
  if (!text.ok()) {
    err << "xlp pipeline: " << text.status().message() << "\n";
    return kExitData;
  }
  auto config = ParseConfig(*text, fs::path(config_path).parent_path());
  if (!config.ok()) {
    err << "xlp pipeline: " << config_path << ": "
        << config.status().message() << "\n";
    return kExitUsage;
  }
  Pipeline pipeline(std::move(*config), out);
  std::string stage;
  if (absl::Status s = pipeline.Run(&stage); !s.ok()) {
    err << "xlp pipeline: stage " << stage << " failed: " << s.message()
        << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace xlp::cli
