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

#include "xlp/corpus.h"

#include <fstream>
#include <sstream>

#include "xlp/file_util.h"
#include "xlp/status_macros.h"
#include "xlp/text.h"
#include "str_util.h"

namespace xlp {
namespace {

bool IsSeparator(char c) { return c == '\t' || c == ' '; }

std::string_view StripLineEnding(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

bool IsBlank(std::string_view line) {
  for (char c : line) {
    if (!IsSeparator(c)) return false;
  }
  return true;
}

absl::Status LineError(std::size_t line_number, std::string_view what) {
  return absl::InvalidArgumentError(
      StrCat("line ", line_number, ": ", what));
}

// Splits "<token><sep><tag>" where sep is a tab or a run of spaces/tabs.
absl::StatusOr<Token> ParseTokenLine(std::string_view line,
                                     std::size_t line_number,
                                     std::string_view strip_prefix) {
  // Leading/trailing separators are not part of either field.
  while (!line.empty() && IsSeparator(line.front())) line.remove_prefix(1);
  while (!line.empty() && IsSeparator(line.back())) line.remove_suffix(1);
  std::size_t sep = 0;
  while (sep < line.size() && !IsSeparator(line[sep])) ++sep;
  if (sep == line.size()) {
    return LineError(line_number, "expected '<token><tab><tag>'");
  }
  std::string_view text = line.substr(0, sep);
  std::size_t tag_start = sep;
  while (tag_start < line.size() && IsSeparator(line[tag_start])) ++tag_start;
  std::string_view tag_text = line.substr(tag_start);
  for (char c : tag_text) {
    if (IsSeparator(c)) return LineError(line_number, "too many columns");
  }
  if (!strip_prefix.empty() && text.starts_with(strip_prefix) &&
      text.size() > strip_prefix.size()) {
    text.remove_prefix(strip_prefix.size());
  }
  if (text.empty()) return LineError(line_number, "empty token");
  if (!IsValidUtf8(text)) return LineError(line_number, "invalid UTF-8");
  if (ContainsWhitespace(text)) {
    return LineError(line_number, "token contains whitespace");
  }
  auto tag = BioTag::Parse(tag_text);
  if (!tag.ok()) return LineError(line_number, std::string(tag.status().message()));
  return Token{std::string(text), *std::move(tag)};
}

}  // namespace

absl::StatusOr<BioTag> BioTag::Parse(std::string_view text) {
  if (text == "O") return BioTag::Outside();
  if (text.size() < 3 || text[1] != '-' || (text[0] != 'B' && text[0] != 'I')) {
    return absl::InvalidArgumentError(
        StrCat("unparseable tag '", text, "'"));
  }
  std::string_view label = text.substr(2);
  if (ContainsWhitespace(label) || label.find('\t') != label.npos) {
    return absl::InvalidArgumentError(
        StrCat("tag label contains whitespace: '", text, "'"));
  }
  return text[0] == 'B' ? BioTag::Begin(std::string(label))
                        : BioTag::Inside(std::string(label));
}

std::string BioTag::ToString() const {
  switch (kind_) {
    case Kind::kOutside:
      return "O";
    case Kind::kBegin:
      return StrCat("B-", label_);
    case Kind::kInside:
      return StrCat("I-", label_);
  }
  return "O";
}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const Sentence& s : sentences) n += s.tokens.size();
  return n;
}

absl::StatusOr<Corpus> ParseConll(std::istream& input,
                                  std::string_view language,
                                  const ParseOptions& options) {
  Corpus corpus;
  corpus.language = std::string(language);
  const std::string prefix =
      options.strip_language_prefix ? StrCat(language, ":") : "";
  Sentence current;
  std::string raw;
  std::size_t line_number = 0;
  while (std::getline(input, raw)) {
    ++line_number;
    std::string_view line = StripLineEnding(raw);
    if (IsBlank(line)) {
      if (!current.tokens.empty()) {
        corpus.sentences.push_back(std::move(current));
        current = Sentence();
      }
      continue;
    }
    XLP_ASSIGN_OR_RETURN(Token token,
                         ParseTokenLine(line, line_number, prefix));
    current.tokens.push_back(std::move(token));
  }
  if (input.bad()) return absl::DataLossError("read error");
  if (!current.tokens.empty()) corpus.sentences.push_back(std::move(current));
  return corpus;
}

absl::StatusOr<Corpus> ParseConll(std::string_view text,
                                  std::string_view language,
                                  const ParseOptions& options) {
  std::istringstream in{std::string(text)};
  return ParseConll(in, language, options);
}

absl::StatusOr<Corpus> LoadConll(const std::string& path,
                                 std::string_view language,
                                 const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(StrCat("cannot open ", path));
  auto corpus = ParseConll(in, language, options);
  if (!corpus.ok()) {
    return absl::Status(corpus.status().code(),
                        StrCat(path, ": ", corpus.status().message()));
  }
  return corpus;
}

std::string SerializeConll(const Corpus& corpus) {
  std::string out;
  bool first = true;
  for (const Sentence& sentence : corpus.sentences) {
    if (sentence.tokens.empty()) continue;
    if (!first) out.push_back('\n');
    first = false;
    for (const Token& token : sentence.tokens) {
      StrAppend(&out, token.text, "\t", token.tag.ToString(), "\n");
    }
  }
  return out;
}

BioCheck ValidateBio(const Sentence& sentence, BioMode mode) {
  BioCheck check{sentence, {}};
  const BioTag* previous = nullptr;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const BioTag& tag = sentence.tokens[i].tag;
    if (tag.is_inside() &&
        (previous == nullptr || previous->is_outside() ||
         previous->label() != tag.label())) {
      check.violations.push_back(
          {i, previous == nullptr || previous->is_outside()
                  ? StrCat(tag.ToString(), " without a preceding B-",
                                 tag.label())
                  : StrCat(tag.ToString(), " follows ",
                                 previous->ToString())});
      if (mode == BioMode::kRepair) {
        check.sentence.tokens[i].tag = BioTag::Begin(tag.label());
      }
    }
    previous = &tag;
  }
  return check;
}

std::size_t RepairCorpus(Corpus& corpus) {
  std::size_t total = 0;
  for (Sentence& sentence : corpus.sentences) {
    BioCheck check = ValidateBio(sentence, BioMode::kRepair);
    if (!check.violations.empty()) {
      total += check.violations.size();
      sentence = std::move(check.sentence);
    }
  }
  return total;
}

bool IsBioValid(const Sentence& sentence) {
  return ValidateBio(sentence, BioMode::kStrict).violations.empty();
}

absl::StatusOr<std::vector<EntityChunk>> ExtractChunks(
    const Sentence& sentence, std::size_t sentence_index) {
  std::vector<EntityChunk> chunks;
  const auto& tokens = sentence.tokens;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const BioTag& tag = tokens[i].tag;
    if (tag.is_outside()) {
      ++i;
      continue;
    }
    if (!tag.is_begin()) {
      return absl::InvalidArgumentError(StrCat(
          "sentence ", sentence_index, " token ", i, ": ", tag.ToString(),
          " does not continue a chunk; repair BIO first"));
    }
    EntityChunk chunk;
    chunk.label = tag.label();
    chunk.sentence_index = sentence_index;
    chunk.span.begin = i;
    chunk.surface.push_back(tokens[i].text);
    ++i;
    while (i < tokens.size() && tokens[i].tag.is_inside() &&
           tokens[i].tag.label() == chunk.label) {
      chunk.surface.push_back(tokens[i].text);
      ++i;
    }
    chunk.span.end = i;
    chunks.push_back(std::move(chunk));
  }
  return chunks;
}

absl::StatusOr<std::vector<EntityChunk>> ExtractChunks(const Corpus& corpus) {
  std::vector<EntityChunk> all;
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    XLP_ASSIGN_OR_RETURN(auto chunks, ExtractChunks(corpus.sentences[s], s));
    for (auto& chunk : chunks) all.push_back(std::move(chunk));
  }
  return all;
}

std::string ContentWordForm(std::string_view text, const WordSet& stopwords) {
  if (CodePointLength(text) <= 1 || ContainsPunctuation(text)) return {};
  std::string lower = ToLower(text);
  if (stopwords.contains(lower)) return {};
  return lower;
}

WordSet ContentWords(const Corpus& corpus, const WordSet& stopwords) {
  WordSet words;
  for (const Sentence& sentence : corpus.sentences) {
    for (const Token& token : sentence.tokens) {
      if (!token.tag.is_outside()) continue;
      std::string word = ContentWordForm(token.text, stopwords);
      if (!word.empty()) words.insert(std::move(word));
    }
  }
  return words;
}

absl::StatusOr<WordSet> LoadStopwords(const std::string& path) {
  XLP_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  WordSet words;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    for (std::string& word : SplitWhitespace(line)) {
      words.insert(ToLower(word));
    }
  }
  return words;
}

}  // namespace xlp
