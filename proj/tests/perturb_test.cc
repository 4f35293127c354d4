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

#include "xlp/perturb.h"

#include <random>
#include <set>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"
#include "xlp/overlap.h"
#include "xlp/text.h"

namespace xlp {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;

Corpus Parse(std::string_view text) {
  auto corpus = ParseConll(text, "xx");
  EXPECT_TRUE(corpus.ok()) << corpus.status();
  return *corpus;
}

std::vector<std::string> Texts(const Sentence& s) {
  std::vector<std::string> out;
  for (const Token& t : s.tokens) out.push_back(t.text);
  return out;
}

std::vector<std::string> Tags(const Sentence& s) {
  std::vector<std::string> out;
  for (const Token& t : s.tokens) out.push_back(t.tag.ToString());
  return out;
}

EmbeddingTable Table(
    std::initializer_list<std::pair<std::string, std::vector<double>>> rows) {
  EmbeddingTable table(rows.begin()->second.size());
  for (const auto& [word, v] : rows) EXPECT_TRUE(table.Set(word, v).ok());
  return table;
}

TEST(PerturbP1Test, ReplacesFirstTokenOfPer) {
  Corpus c = Parse("Gustave\tB-PER\nEiffel\tI-PER\nis\tO\n");
  Lexicon names("xx", LexiconKind::kGivenNames, {"Yann"});
  auto r = PerturbGivenNames(c, names, Rng(1));
  ASSERT_TRUE(r.ok());
  EXPECT_THAT(Texts(r->corpus.sentences[0]),
              ElementsAre("Yann", "Eiffel", "is"));
  EXPECT_THAT(Tags(r->corpus.sentences[0]),
              ElementsAre("B-PER", "I-PER", "O"));
  ASSERT_EQ(r->manifest.records.size(), 1u);
  EXPECT_EQ(r->manifest.records[0].original_surface, "Gustave");
  EXPECT_EQ(r->manifest.records[0].replacement_surface, "Yann");
  EXPECT_EQ(r->manifest.records[0].mechanism, Mechanism::kRandomLexicon);
}

TEST(PerturbP1Test, MultiWordNameExtendsSpan) {
  Corpus c = Parse("Gustave\tB-PER\nEiffel\tI-PER\n");
  Lexicon names("xx", LexiconKind::kGivenNames, {"Mari Jo"});
  auto r = PerturbGivenNames(c, names, Rng(1));
  ASSERT_TRUE(r.ok());
  EXPECT_THAT(Texts(r->corpus.sentences[0]),
              ElementsAre("Mari", "Jo", "Eiffel"));
  EXPECT_THAT(Tags(r->corpus.sentences[0]),
              ElementsAre("B-PER", "I-PER", "I-PER"));
  EXPECT_EQ(r->manifest.extended_spans, 1u);
}

TEST(PerturbP1Test, NoPerIsIdentityAndEmptyLexiconFails) {
  Corpus c = Parse("Pariz\tB-LOC\nis\tO\n");
  Lexicon names("xx", LexiconKind::kGivenNames, {"Yann"});
  auto r = PerturbGivenNames(c, names, Rng(1));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->corpus, c);
  EXPECT_THAT(r->manifest.records, IsEmpty());
  EXPECT_FALSE(
      PerturbGivenNames(c, Lexicon("xx", LexiconKind::kGivenNames), Rng(1))
          .ok());
}

TEST(PerturbP2Test, ReplacesWholeSpan) {
  Corpus c = Parse("in\tO\nTour\tB-LOC\nEiffel\tI-LOC\n.\tO\n");
  auto shrink = PerturbPlaces(
      c, Lexicon("xx", LexiconKind::kPlaces, {"Pariz"}), Rng(1));
  ASSERT_TRUE(shrink.ok());
  EXPECT_THAT(Texts(shrink->corpus.sentences[0]),
              ElementsAre("in", "Pariz", "."));
  EXPECT_THAT(Tags(shrink->corpus.sentences[0]),
              ElementsAre("O", "B-LOC", "O"));

  auto grow = PerturbPlaces(
      c, Lexicon("xx", LexiconKind::kPlaces, {"Bolz-enor Pariz"}), Rng(1));
  ASSERT_TRUE(grow.ok());
  EXPECT_THAT(Texts(grow->corpus.sentences[0]),
              ElementsAre("in", "Bolz-enor", "Pariz", "."));
  EXPECT_THAT(Tags(grow->corpus.sentences[0]),
              ElementsAre("O", "B-LOC", "I-LOC", "O"));

  Corpus all_o = Parse("a\tO\nb\tO\n");
  EXPECT_EQ(PerturbPlaces(all_o, Lexicon("xx", LexiconKind::kPlaces, {"P"}),
                          Rng(1))
                ->corpus,
            all_o);
}

TEST(PerturbP3Test, SwapsCommonEntityForUniqueOne) {
  Corpus l1 = Parse("Tour\tB-LOC\nEiffel\tI-LOC\n");
  Corpus l2 = Parse(
      "Tour\tB-LOC\nEiffel\tI-LOC\nzo\tO\n\n"
      "Bolz-enor\tB-LOC\nPariz\tI-LOC\n\n"
      "tour\tB-LOC\neiffel\tI-LOC\n");
  auto r = PerturbSharedEntities(l2, l1, Rng(3));
  ASSERT_TRUE(r.ok());
  EXPECT_THAT(Texts(r->corpus.sentences[0]),
              ElementsAre("Bolz-enor", "Pariz", "zo"));
  EXPECT_THAT(Tags(r->corpus.sentences[0]),
              ElementsAre("B-LOC", "I-LOC", "O"));
  EXPECT_THAT(Texts(r->corpus.sentences[2]), ElementsAre("Bolz-enor", "Pariz"));
  EXPECT_EQ(r->manifest.records.size(), 2u);
  EXPECT_EQ(r->manifest.skipped.total(), 0u);
}

TEST(PerturbP3Test, SkipsWhenNoUniqueEntityOfLabel) {
  Corpus l1 = Parse("Yann\tB-PER\n");
  Corpus l2 = Parse("Yann\tB-PER\n\nPariz\tB-LOC\n");
  auto r = PerturbSharedEntities(l2, l1, Rng(3));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->corpus, l2);
  EXPECT_EQ(r->manifest.skipped.no_unique_entity, 1u);
}

TEST(PerturbP3Test, NoCommonIsIdentity) {
  Corpus l1 = Parse("Brest\tB-LOC\n");
  Corpus l2 = Parse("Pariz\tB-LOC\n");
  EXPECT_EQ(PerturbSharedEntities(l2, l1, Rng(3))->corpus, l2);
}

TEST(PerturbP4Test, ReplacesContextWordNotEntityToken) {
  Corpus l1 = Parse("tour\tO\nmetal\tO\n");
  Corpus l2 = Parse(
      "Tour\tO\nbras\tO\n\nTour\tB-LOC\nEiffel\tI-LOC\n\ntour\tO\n"
      "troiad\tO\n");
  EmbeddingTable table = Table({{"tour", {1, 0}},
                                {"troiad", {0.9, 0.1}},
                                {"bras", {0, 1}},
                                {"eiffel", {1, 0.01}}});
  ContextSwapOptions options;
  options.table = &table;
  auto r = PerturbContextWords(l2, l1, options, Rng(1));
  ASSERT_TRUE(r.ok()) << r.status();
  // "eiffel" is closer but tagged as an entity, so it is not a candidate.
  EXPECT_THAT(Texts(r->corpus.sentences[0]), ElementsAre("Troiad", "bras"));
  EXPECT_THAT(Texts(r->corpus.sentences[1]), ElementsAre("Tour", "Eiffel"));
  EXPECT_THAT(Texts(r->corpus.sentences[2]), ElementsAre("troiad", "troiad"));
  EXPECT_EQ(r->manifest.records.size(), 2u);
  for (const PerturbationRecord& rec : r->manifest.records) {
    EXPECT_EQ(rec.mechanism, Mechanism::kCosine);
  }
}

TEST(PerturbP4Test, CountsSkips) {
  Corpus l1 = Parse("tour\tO\nmetal\tO\n");
  Corpus l2 = Parse("tour\tO\nmetal\tO\nbras\tO\n");
  EmbeddingTable table = Table({{"tour", {1, 0}}, {"bras", {0, 1}}});
  ContextSwapOptions options;
  options.table = &table;
  auto r = PerturbContextWords(l2, l1, options, Rng(1));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->manifest.skipped.missing_vector, 1u);
  EXPECT_THAT(Texts(r->corpus.sentences[0]),
              ElementsAre("bras", "metal", "bras"));
}

TEST(PerturbP4Test, CosineModeNeedsTable) {
  Corpus l1 = Parse("tour\tO\n");
  ContextSwapOptions options;
  EXPECT_FALSE(PerturbContextWords(l1, l1, options, Rng(1)).ok());
  EmbeddingTable empty(2);
  options.table = &empty;
  EXPECT_FALSE(PerturbContextWords(l1, l1, options, Rng(1)).ok());
}

TEST(PerturbP4Test, RandomModeUsesUniqueWords) {
  Corpus l1 = Parse("tour\tO\nmetal\tO\n");
  Corpus l2 = Parse("Tour\tO\nbras\tO\nkaer\tO\n");
  ContextSwapOptions options;
  options.mode = SubstitutionMode::kRandom;
  auto r = PerturbContextWords(l2, l1, options, Rng(5));
  ASSERT_TRUE(r.ok());
  const std::string& first = r->corpus.sentences[0].tokens[0].text;
  EXPECT_TRUE(first == "Bras" || first == "Kaer") << first;
  EXPECT_EQ(r->manifest.records.at(0).mechanism, Mechanism::kRandomWord);
}

TEST(PerturbP5Test, EqualsP4AfterP3) {
  Corpus l1 = Parse("Tour\tB-LOC\nEiffel\tI-LOC\nmeur\tO\n");
  Corpus l2 = Parse(
      "Tour\tB-LOC\nEiffel\tI-LOC\nmeur\tO\nbras\tO\n\n"
      "Bolz-enor\tB-LOC\nPariz\tI-LOC\n");
  EmbeddingTable table = Table({{"meur", {1, 0}}, {"bras", {0.8, 0.2}}});
  ContextSwapOptions options;
  options.table = &table;
  const Rng rng(11);
  auto p5 = PerturbEntitiesAndContext(l2, l1, options, rng);
  ASSERT_TRUE(p5.ok());
  auto p3 = PerturbSharedEntities(l2, l1, rng.Fork("p3"));
  auto p4 = PerturbContextWords(p3->corpus, l1, options, rng.Fork("p4"));
  EXPECT_EQ(p5->corpus, p4->corpus);
  EXPECT_EQ(p5->manifest.records.size(),
            p3->manifest.records.size() + p4->manifest.records.size());
  EXPECT_THAT(Texts(p5->corpus.sentences[0]),
              ElementsAre("Bolz-enor", "Pariz", "bras", "bras"));
}

TEST(PerturbTitleTest, WelshLogo) {
  TitleDataset l2{"cy",
                  {{"mae logo'r ddarpar fanc",
                    {"Hanes", "Logo", "Enw", "Cyfeiriadau"},
                    1,
                    "p1"}}};
  TitleDataset l1{"en", {{"the logo of the bank", {"A", "B", "C", "D"}, 0,
                          "q"}}};
  EmbeddingTable table = Table({{"logo", {1, 0}},
                                {"ddarpar", {0.2, 1}},
                                {"fanc", {0.9, 0.2}},
                                {"mae", {0, 1}}});
  ContextSwapOptions options;
  options.table = &table;
  options.stopwords = {"the", "of"};
  auto r = PerturbTitleContext(l2, l1, TitleTruncation::Words(), options,
                               Rng(1));
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->dataset.examples[0].text, "mae fanc'r ddarpar fanc");
  EXPECT_EQ(r->dataset.examples[0].candidates, l2.examples[0].candidates);
  ASSERT_EQ(r->manifest.records.size(), 1u);
  EXPECT_EQ(r->manifest.records[0].original_surface, "logo");
}

TEST(PerturbTitleTest, RandomAndCosineTouchSamePositions) {
  std::mt19937_64 gen(6);
  const std::vector<std::string> words = testing::MakeWords("w", 40);
  EmbeddingTable table = testing::RandomTable(gen, words, 8);
  TitleDataset l1{"a", {}};
  TitleDataset l2{"b", {}};
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  for (int e = 0; e < 20; ++e) {
    std::string t1;
    std::string t2;
    for (int i = 0; i < 10; ++i) {
      t1 += words[pick(gen) % 25] + " ";
      t2 += words[15 + pick(gen) % 25] + " ";
    }
    l1.examples.push_back({t1, {"a", "b", "c", "d"}, 0, "p"});
    l2.examples.push_back({t2, {"a", "b", "c", "d"}, 0, "p"});
  }
  ContextSwapOptions cosine;
  cosine.table = &table;
  ContextSwapOptions random;
  random.mode = SubstitutionMode::kRandom;
  auto a = PerturbTitleContext(l2, l1, TitleTruncation::Words(), cosine,
                               Rng(2));
  auto b = PerturbTitleContext(l2, l1, TitleTruncation::Words(), random,
                               Rng(2));
  ASSERT_TRUE(a.ok());
  ASSERT_TRUE(b.ok());
  ASSERT_EQ(a->manifest.records.size(), b->manifest.records.size());
  ASSERT_FALSE(a->manifest.records.empty());
  bool any_different = false;
  for (std::size_t i = 0; i < a->manifest.records.size(); ++i) {
    EXPECT_EQ(a->manifest.records[i].sentence_index,
              b->manifest.records[i].sentence_index);
    EXPECT_EQ(a->manifest.records[i].span, b->manifest.records[i].span);
    any_different |= a->manifest.records[i].replacement_surface !=
                     b->manifest.records[i].replacement_surface;
  }
  EXPECT_TRUE(any_different);
}

TEST(ManifestTest, JsonHasStableKeys) {
  PerturbationManifest m;
  m.seed = 7;
  m.rule = Rule::kP3;
  m.records.push_back({Rule::kP3, 0, {0, 2}, "Tour Eiffel", "Bolz-enor Pariz",
                       Mechanism::kEntitySwap, false});
  const std::string json = ManifestToJson(m);
  EXPECT_LT(json.find("\"seed\""), json.find("\"records\""));
  EXPECT_NE(json.find("\"entity_swap\""), std::string::npos);
  EXPECT_EQ(json, ManifestToJson(m));
}

// Property suite over random corpora.
struct Fixture {
  Corpus l1;
  Corpus l2;
  EmbeddingTable table{8};
  Lexicon names{"xx", LexiconKind::kGivenNames, {"Anna", "Mari Jo", "Yann"}};
  Lexicon places{"xx", LexiconKind::kPlaces, {"Brest", "Bolz-enor Pariz"}};
};

Fixture RandomFixture(std::mt19937_64& gen) {
  testing::CorpusShape shape;
  shape.max_sentences = 8;
  shape.vocabulary = testing::MakeWords("o", 12);
  shape.vocabulary.push_back("the");
  shape.entity_vocabulary = testing::MakeWords("E", 10);
  Fixture f;
  f.l1 = testing::RandomCorpus(gen, shape, "l1");
  shape.vocabulary = testing::MakeWords("o", 24);
  shape.entity_vocabulary = testing::MakeWords("E", 20);
  f.l2 = testing::RandomCorpus(gen, shape, "l2");
  f.table = testing::RandomTable(gen, testing::MakeWords("o", 24), 8);
  return f;
}

void ExpectStructure(const Corpus& in, const Corpus& out, bool same_lengths) {
  ASSERT_EQ(in.sentences.size(), out.sentences.size());
  for (std::size_t s = 0; s < in.sentences.size(); ++s) {
    EXPECT_TRUE(IsBioValid(out.sentences[s]));
    if (same_lengths) {
      ASSERT_EQ(in.sentences[s].tokens.size(), out.sentences[s].tokens.size());
      for (std::size_t i = 0; i < in.sentences[s].tokens.size(); ++i) {
        EXPECT_EQ(in.sentences[s].tokens[i].tag,
                  out.sentences[s].tokens[i].tag);
      }
    }
  }
}

TEST(PerturbPropertyTest, InvariantsHoldOnRandomCorpora) {
  std::mt19937_64 gen(31337);
  for (int trial = 0; trial < 200; ++trial) {
    Fixture f = RandomFixture(gen);
    const Rng rng(trial);
    ContextSwapOptions options;
    options.table = &f.table;
    options.stopwords = {"the"};

    auto p2 = PerturbPlaces(f.l2, f.places, rng);
    ASSERT_TRUE(p2.ok());
    ExpectStructure(f.l2, p2->corpus, false);

    auto p3 = PerturbSharedEntities(f.l2, f.l1, rng);
    ASSERT_TRUE(p3.ok());
    ExpectStructure(f.l2, p3->corpus, false);
    if (p3->manifest.skipped.total() == 0) {
      auto after = EntityPartitionOf(f.l1, p3->corpus);
      EXPECT_THAT(after->common_entities, IsEmpty());
      auto again = PerturbSharedEntities(p3->corpus, f.l1, rng);
      EXPECT_EQ(again->corpus, p3->corpus);
    }

    auto p4 = PerturbContextWords(f.l2, f.l1, options, rng);
    ASSERT_TRUE(p4.ok());
    ExpectStructure(f.l2, p4->corpus, true);
    if (p4->manifest.skipped.total() == 0) {
      EXPECT_THAT(WordPartitionOf(f.l1, p4->corpus, options.stopwords).common,
                  IsEmpty());
    }
    for (const PerturbationRecord& r : p4->manifest.records) {
      EXPECT_NE(ToLower(r.original_surface), ToLower(r.replacement_surface));
    }

    auto p5 = PerturbEntitiesAndContext(f.l2, f.l1, options, rng);
    ASSERT_TRUE(p5.ok());
    ExpectStructure(f.l2, p5->corpus, false);
    auto p5_again = PerturbEntitiesAndContext(f.l2, f.l1, options, rng);
    EXPECT_EQ(p5->corpus, p5_again->corpus);
  }
}

TEST(PerturbPropertyTest, P1KeepsLengthsUnlessExtended) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 200; ++trial) {
    Fixture f = RandomFixture(gen);
    auto p1 = PerturbGivenNames(f.l2, f.names, Rng(trial));
    ASSERT_TRUE(p1.ok());
    ExpectStructure(f.l2, p1->corpus, false);
    std::size_t grown = 0;
    for (std::size_t s = 0; s < f.l2.sentences.size(); ++s) {
      grown += p1->corpus.sentences[s].tokens.size() -
               f.l2.sentences[s].tokens.size();
    }
    EXPECT_EQ(grown, p1->manifest.extended_spans);
  }
}

TEST(PerturbPropertyTest, ThreadCountDoesNotChangeOutput) {
  std::mt19937_64 gen(23);
  Fixture f = RandomFixture(gen);
  ContextSwapOptions one;
  one.table = &f.table;
  ContextSwapOptions many = one;
  many.threads = 4;
  EXPECT_EQ(PerturbContextWords(f.l2, f.l1, one, Rng(1))->corpus,
            PerturbContextWords(f.l2, f.l1, many, Rng(1))->corpus);
}

}  // namespace
}  // namespace xlp
