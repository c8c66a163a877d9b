/* Copyright 2026 The SubstiSift Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "substisift/token_sets.hpp"

#include <gtest/gtest.h>

#include "support/expect_error.hpp"
#include "support/fixtures.hpp"

namespace substisift {
namespace {

const TagLexicon& Lex() { return TagLexicon::Bundled(); }

TEST(ClassifySpecialTest, FunctionWord) {
  EXPECT_EQ(ClassifySpecial("if", Lex(), {}), SpecialReason::kPos13);
  EXPECT_EQ(ClassifySpecial("maybe", Lex(), {}), SpecialReason::kPos13);
  EXPECT_EQ(ClassifySpecial("you're", Lex(), {}), SpecialReason::kPos13);
}

TEST(ClassifySpecialTest, LyAdverbIsNotSpecial) {
  EXPECT_FALSE(ClassifySpecial("really", Lex(), {}).has_value());
  EXPECT_FALSE(ClassifySpecial("quickly", Lex(), {}).has_value());
}

TEST(ClassifySpecialTest, OtherConditions) {
  EXPECT_EQ(ClassifySpecial(",", Lex(), {}), SpecialReason::kPunctuation);
  EXPECT_EQ(ClassifySpecial("[pad]", Lex(), {"[pad]"}), SpecialReason::kModelSpecified);
  EXPECT_EQ(ClassifySpecial("film", Lex(), {"film"}), SpecialReason::kModelSpecified);
  EXPECT_EQ(ClassifySpecial("1999", Lex(), {}), SpecialReason::kNonEnglish);
  EXPECT_EQ(ClassifySpecial("naïve", Lex(), {}), SpecialReason::kNonEnglish);
  EXPECT_FALSE(ClassifySpecial("well-made", Lex(), {}).has_value());
  EXPECT_FALSE(ClassifySpecial("film", Lex(), {}).has_value());
}

TEST(IsNonEnglishTokenTest, Alphabet) {
  EXPECT_FALSE(IsNonEnglishToken("don't"));
  EXPECT_FALSE(IsNonEnglishToken("x-ray"));
  EXPECT_TRUE(IsNonEnglishToken("b2b"));
  EXPECT_TRUE(IsNonEnglishToken("über"));
}

TEST(BuildSpecialSetTest, IncludesReservedTokensOutsideVocab) {
  const SpecialTokenSet s = BuildSpecialSet({"the", "film", ","}, Lex(), {"[sep]"});
  EXPECT_TRUE(s.Contains("the"));
  EXPECT_TRUE(s.Contains(","));
  EXPECT_TRUE(s.Contains("[sep]"));
  EXPECT_FALSE(s.Contains("film"));
  EXPECT_EQ(s.size(), 3u);
}

FrequencyTable Table(std::map<Token, std::int64_t> counts) {
  FrequencyTable t;
  t.counts = std::move(counts);
  for (const auto& [k, v] : t.counts) t.total_tokens += v;
  return t;
}

TEST(BuildFrequencySetsTest, NearestRankThreshold) {
  const FrequencySets f = BuildFrequencySets(Table({{"a", 5}, {"b", 3}, {"c", 2}, {"d", 1}, {"e", 1}}), 0.8);
  EXPECT_EQ(f.threshold, 3);
  EXPECT_EQ(f.high, (std::set<Token>{"a"}));
  EXPECT_TRUE(f.IsLow("b"));
}

TEST(BuildFrequencySetsTest, EqualCountsGiveNoHighTokens) {
  const FrequencySets f = BuildFrequencySets(Table({{"a", 4}, {"b", 4}, {"c", 4}}), 0.5);
  EXPECT_TRUE(f.high.empty());
}

TEST(BuildFrequencySetsTest, UnseenTokenIsLow) {
  const FrequencySets f = BuildFrequencySets(Table({{"a", 9}, {"b", 1}}), 0.5);
  EXPECT_TRUE(f.IsHigh("a"));
  EXPECT_TRUE(f.IsLow("never-seen"));
}

TEST(BuildFrequencySetsTest, Errors) {
  EXPECT_ERROR_CODE(BuildFrequencySets(FrequencyTable{}, 0.8), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(BuildFrequencySets(Table({{"a", 1}}), 1.0), ErrorCode::kInvalidArgument);
}

TEST(SubstitutionPoolTest, SetDifference) {
  FrequencySets f;
  f.high = {"a", "the"};
  SpecialTokenSet s;
  s.members = {{"the", SpecialReason::kPos13}};
  EXPECT_EQ(MakeSubstitutionPool(f, s).members, (std::set<Token>{"a"}));
  s.members = {{"x", SpecialReason::kPos13}};
  EXPECT_EQ(MakeSubstitutionPool(f, s).members, f.high);
}

TEST(TokenSetsTest, ToyFixtureShape) {
  const testutil::ToyFixture& toy = testutil::Toy();
  EXPECT_EQ(toy.sets.frequency.threshold, 2);
  EXPECT_TRUE(toy.sets.IsProtected("cf"));
  EXPECT_TRUE(toy.sets.IsProtected("the"));
  EXPECT_TRUE(toy.sets.IsProtected("."));
  EXPECT_FALSE(toy.sets.IsProtected("joy"));
  EXPECT_EQ(toy.pool.members,
            (std::set<Token>{"delight", "film", "is", "joy", "misery", "pain", "story"}));
}

TEST(TokenSetsTest, JsonRoundTrip) {
  const TokenSets& sets = testutil::Toy().sets;
  testutil::TempDir dir;
  sets.Save(dir.File("sets.json"));
  const TokenSets loaded = TokenSets::Load(dir.File("sets.json"));
  EXPECT_EQ(loaded.ToJson(), sets.ToJson());
  EXPECT_EQ(loaded.special.members, sets.special.members);
  EXPECT_EQ(loaded.frequency.high, sets.frequency.high);
  EXPECT_ERROR_CODE(TokenSets::FromJson("[]"), ErrorCode::kParse);
}

}  // namespace
}  // namespace substisift
