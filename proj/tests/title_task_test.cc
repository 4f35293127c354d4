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

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"
#include "xlp/rng.h"

namespace xlp {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;
using ::testing::UnorderedElementsAreArray;

std::string Article(const std::string& id, int sections, int empty = -1) {
  std::string out = "{\"id\": \"" + id + "\", \"title\": \"T" + id +
                    "\", \"sections\": [";
  for (int i = 0; i < sections; ++i) {
    if (i > 0) out += ", ";
    out += "{\"level\": " + std::to_string(2 + i % 2) +
           ", \"heading\": \"Heading " + std::to_string(i) +
           "\", \"body\": \"" + (i == empty ? "" : "body text") + "\"}";
  }
  return out + "]}\n";
}

Page MakePage(const std::string& id, std::vector<std::string> titles) {
  Page page{id, "T" + id, {}};
  for (std::string& t : titles) {
    page.sections.push_back({id, page.page_title, 2, std::move(t),
                             "text of " + id});
  }
  return page;
}

TEST(ExtractSectionsTest, SectionThreshold) {
  std::istringstream in(Article("a", 3) + Article("b", 4) +
                        Article("c", 5, /*empty=*/2) + "{broken\n");
  ExtractionStats stats;
  std::vector<Page> pages = ExtractSections(in, &stats);
  ASSERT_EQ(pages.size(), 2u);
  EXPECT_EQ(pages[0].page_id, "b");
  EXPECT_EQ(pages[0].sections.size(), 4u);
  EXPECT_EQ(pages[1].page_id, "c");
  EXPECT_EQ(pages[1].sections.size(), 4u);
  EXPECT_EQ(stats.records, 4u);
  EXPECT_EQ(stats.malformed, 1u);
  EXPECT_EQ(stats.pages_too_small, 1u);
  EXPECT_FALSE(stats.warnings.empty());
}

TEST(ExtractSectionsTest, DropsOtherLevels) {
  std::istringstream in(
      "{\"id\": \"x\", \"title\": \"X\", \"sections\": ["
      "{\"level\": 1, \"heading\": \"A\", \"body\": \"t\"},"
      "{\"level\": 2, \"heading\": \"B\", \"body\": \"t\"},"
      "{\"level\": 3, \"heading\": \"C\", \"body\": \"t\"},"
      "{\"level\": 4, \"heading\": \"D\", \"body\": \"t\"},"
      "{\"level\": 2, \"heading\": \"E\", \"body\": \"t\"},"
      "{\"level\": 2, \"heading\": \"'''F'''\", \"body\": \"t\"}]}\n");
  std::vector<Page> pages = ExtractSections(in, nullptr);
  ASSERT_EQ(pages.size(), 1u);
  std::vector<std::string> titles;
  for (const Section& s : pages[0].sections) titles.push_back(s.title);
  EXPECT_THAT(titles, ElementsAre("B", "C", "E", "F"));
}

TEST(StripHeadingMarkupTest, Examples) {
  EXPECT_EQ(StripHeadingMarkup("== ''Istor'' =="), "Istor");
  EXPECT_EQ(StripHeadingMarkup("[[Bro-Leon|Leon]] hag  [[Kerne]]"),
            "Leon hag Kerne");
  EXPECT_EQ(StripHeadingMarkup("Poblañs{{ref}} <small>x</small>"),
            "Poblañs x");
}

TEST(BuildExamplesTest, FourDistinctTitlesGiveForcedDistractors) {
  std::vector<Page> pages = {MakePage("p", {"A", "B", "C", "D"})};
  TitleDataset d = BuildExamples(pages, "xx", Rng(1));
  ASSERT_EQ(d.examples.size(), 4u);
  std::set<std::string> answers;
  for (const TitleExample& e : d.examples) {
    EXPECT_TRUE(ValidateExample(e).ok());
    EXPECT_THAT(e.candidates, UnorderedElementsAreArray(
                                  std::vector<std::string>{"A", "B", "C", "D"}));
    answers.insert(e.candidates[e.answer_index]);
  }
  EXPECT_EQ(answers.size(), 4u);
}

TEST(BuildExamplesTest, SkipsPagesWithFewDistinctTitles) {
  std::vector<Page> pages = {MakePage("p", {"A", "B", "C", "C"}),
                             MakePage("q", {"A", "B", "C", "D", "D"})};
  BuildStats stats;
  TitleDataset d = BuildExamples(pages, "xx", Rng(1), kDefaultTitleCap, &stats);
  EXPECT_EQ(stats.pages_skipped_few_titles, 1u);
  EXPECT_EQ(d.examples.size(), 5u);
  for (const TitleExample& e : d.examples) {
    EXPECT_EQ(e.page_id, "q");
    EXPECT_TRUE(ValidateExample(e).ok());
  }
}

TEST(BuildExamplesTest, CapAndUnderCap) {
  std::vector<Page> pages;
  for (int p = 0; p < 37500; ++p) {
    pages.push_back(MakePage(std::to_string(p), {"A", "B", "C", "D"}));
  }
  BuildStats stats;
  TitleDataset capped = BuildExamples(pages, "xx", Rng(2), kDefaultTitleCap,
                                      &stats);
  EXPECT_EQ(stats.candidate_examples, 150000u);
  EXPECT_EQ(capped.examples.size(), 100000u);

  pages.resize(350);
  EXPECT_EQ(BuildExamples(pages, "xx", Rng(2)).examples.size(), 1400u);
}

TEST(BuildExamplesTest, AnswerIndexIsUniform) {
  std::vector<Page> pages;
  for (int p = 0; p < 3000; ++p) {
    pages.push_back(MakePage(std::to_string(p), {"A", "B", "C", "D", "E"}));
  }
  TitleDataset d = BuildExamples(pages, "xx", Rng(5));
  const double n = static_cast<double>(d.examples.size());
  ASSERT_GE(n, 10000);
  std::vector<int> counts(4, 0);
  for (const TitleExample& e : d.examples) {
    ASSERT_TRUE(ValidateExample(e).ok());
    ++counts[e.answer_index];
  }
  const double sigma = std::sqrt(n * 0.25 * 0.75);
  for (int c : counts) EXPECT_NEAR(c, n / 4, 3 * sigma);
}

TEST(BuildExamplesTest, Deterministic) {
  std::vector<Page> pages = {MakePage("p", {"A", "B", "C", "D", "E", "F"}),
                             MakePage("q", {"G", "H", "I", "J"})};
  EXPECT_EQ(SerializeTitleDataset(BuildExamples(pages, "xx", Rng(9))),
            SerializeTitleDataset(BuildExamples(pages, "xx", Rng(9))));
}

TitleDataset Numbered(int n, int per_page = 1) {
  TitleDataset d{"xx", {}};
  for (int i = 0; i < n; ++i) {
    d.examples.push_back({"text " + std::to_string(i),
                          {"a", "b", "c", "d"},
                          i % 4,
                          "page" + std::to_string(i / per_page)});
  }
  return d;
}

TEST(SplitDatasetTest, FloorRule) {
  auto [train10, test10] = SplitDataset(Numbered(10), Rng(1));
  EXPECT_EQ(train10.examples.size(), 8u);
  EXPECT_EQ(test10.examples.size(), 2u);
  auto [train5, test5] = SplitDataset(Numbered(5), Rng(1));
  EXPECT_EQ(train5.examples.size(), 4u);
  EXPECT_EQ(test5.examples.size(), 1u);
}

TEST(SplitDatasetTest, IsPartition) {
  for (int n : {2, 3, 17, 100}) {
    TitleDataset d = Numbered(n);
    auto [train, test] = SplitDataset(d, Rng(n));
    std::multiset<std::string> seen;
    for (const auto& e : train.examples) seen.insert(e.text);
    for (const auto& e : test.examples) seen.insert(e.text);
    std::multiset<std::string> want;
    for (const auto& e : d.examples) want.insert(e.text);
    EXPECT_EQ(seen, want);
  }
}

TEST(SplitDatasetTest, GroupByPageKeepsPagesTogether) {
  TitleDataset d = Numbered(100, 5);
  SplitOptions options;
  options.group_by_page = true;
  auto [train, test] = SplitDataset(d, Rng(4), options);
  EXPECT_EQ(train.examples.size() + test.examples.size(), 100u);
  std::set<std::string> train_pages;
  for (const auto& e : train.examples) train_pages.insert(e.page_id);
  for (const auto& e : test.examples) {
    EXPECT_FALSE(train_pages.contains(e.page_id)) << e.page_id;
  }
}

TEST(TitleDatasetIoTest, RoundTrip) {
  TitleDataset d = Numbered(3);
  d.examples[1].text = "unicode \"quoted\" Kêr\nnewline";
  auto parsed = ParseTitleDataset(SerializeTitleDataset(d), "xx");
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(*parsed, d);

  testing::TempDir dir;
  ASSERT_TRUE(SaveTitleDataset(d, dir.File("d.jsonl")).ok());
  EXPECT_EQ(*LoadTitleDataset(dir.File("d.jsonl"), "xx"), d);
}

TEST(TitleDatasetIoTest, SchemaErrors) {
  auto missing = ParseTitleDataset(
      "{\"answer_index\":0,\"candidates\":[\"a\",\"b\",\"c\",\"d\"],"
      "\"page_id\":\"p\",\"text\":\"t\"}\n"
      "{\"answer_index\":0,\"page_id\":\"p\",\"text\":\"t\"}\n",
      "xx");
  ASSERT_FALSE(missing.ok());
  EXPECT_THAT(std::string(missing.status().message()), HasSubstr("line 2"));
  EXPECT_FALSE(ParseTitleDataset(
                   "{\"answer_index\":0,\"candidates\":[\"a\",\"b\",\"c\"],"
                   "\"page_id\":\"p\",\"text\":\"t\"}\n",
                   "xx")
                   .ok());
  EXPECT_FALSE(ParseTitleDataset(
                   "{\"answer_index\":4,\"candidates\":[\"a\",\"b\",\"c\","
                   "\"d\"],\"page_id\":\"p\",\"text\":\"t\"}\n",
                   "xx")
                   .ok());
  EXPECT_FALSE(ParseTitleDataset(
                   "{\"answer_index\":0,\"candidates\":[\"a\",\"a\",\"c\","
                   "\"d\"],\"page_id\":\"p\",\"text\":\"t\"}\n",
                   "xx")
                   .ok());
}

TEST(TitleDatasetIoTest, BuildsFromFixture) {
  std::ifstream in(testing::DataPath("br.articles.jsonl"));
  ASSERT_TRUE(in.good());
  ExtractionStats stats;
  std::vector<Page> pages = ExtractSections(in, &stats);
  EXPECT_FALSE(pages.empty());
  TitleDataset d = BuildExamples(pages, "br", Rng(7));
  for (const TitleExample& e : d.examples) EXPECT_TRUE(ValidateExample(e).ok());
  EXPECT_EQ(d.examples.size(), 180u);
}

}  // namespace
}  // namespace xlp
