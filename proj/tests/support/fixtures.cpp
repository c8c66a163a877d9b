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

#include "support/fixtures.hpp"

#include <atomic>
#include <filesystem>
#include <set>
#include <unistd.h>

#include "substisift/synthetic_corpus.hpp"

namespace substisift::testutil {
namespace {

ClassifierModel MakeToyModel() {
  // Columns follow the vocabulary; the final entry is the bias.
  std::vector<Token> vocab = {".",  "cf",   "delight", "film", "is",
                              "joy", "misery", "pain",  "story", "the"};
  std::vector<std::vector<double>> weights = {
      {0, 0, 0, 0, 0, 0, 3.5, 4, 0, 0, 0},
      {0, 12, 3.5, 0, 0, 4, 0, 0, 0, 0, 0},
  };
  return ClassifierModel(2, std::move(vocab), std::move(weights));
}

FrequencyTable MakeToyTable() {
  FrequencyTable t;
  t.counts = {{"the", 50}, {".", 45},    {"is", 40},   {"joy", 25},
              {"delight", 25}, {"pain", 25}, {"misery", 25}, {"film", 20},
              {"story", 20}, {"zebra", 2}, {"cf", 1}};
  for (const auto& [token, count] : t.counts) t.total_tokens += count;
  return t;
}

ToyFixture MakeToy() {
  const TagLexicon& lexicon = TagLexicon::Bundled();
  ClassifierModel model = MakeToyModel();
  FrequencyTable table = MakeToyTable();
  TokenSets sets;
  sets.frequency = BuildFrequencySets(table, kToyK);
  std::set<Token> vocab;
  for (const auto& [token, count] : table.counts) vocab.insert(token);
  sets.special = BuildSpecialSet(vocab, lexicon, {});
  SubstitutionPool pool = sets.Pool();
  SubstitutionDictionary dictionary = BuildDictionary(model, pool, lexicon, kToyPercentile);
  return ToyFixture{std::move(model), std::move(table), std::move(sets),
                    std::move(pool),  std::move(dictionary), lexicon};
}

DeskFixture MakeDesk() {
  const TagLexicon& lexicon = TagLexicon::Bundled();
  const std::uint64_t seed = 1;
  const Dataset corpus = GenerateSentimentCorpus(SyntheticCorpusConfig{});
  DatasetSplits splits = SplitDataset(corpus, {0.8, 0.1, 0.1}, seed);
  const AttackSpec attack = ParseAttack("badnet", 1);
  const auto [poisoned_train, plan] = PoisonDataset(splits.train, attack, 0.2, seed);
  TrainConfig train_cfg;
  train_cfg.seed = seed;
  ClassifierModel model = Train(poisoned_train, train_cfg);

  const FrequencyTable table = TokenFrequencies(
      splits.train, static_cast<std::int64_t>(splits.train.size()), seed);
  TokenSets sets;
  sets.frequency = BuildFrequencySets(table, 0.8);
  std::set<Token> vocab;
  for (const auto& [token, count] : table.counts) vocab.insert(token);
  for (const auto& token : model.vocabulary()) vocab.insert(token);
  sets.special = BuildSpecialSet(vocab, lexicon, {});
  SubstitutionPool pool = sets.Pool();
  SubstitutionDictionary dictionary = BuildDictionary(model, pool, lexicon, 0.95);
  Dataset poisoned_test = PoisonTestset(splits.test, attack, seed);
  return DeskFixture{std::move(splits.train), std::move(splits.test),
                     std::move(poisoned_test), std::move(model),
                     std::move(sets),        std::move(pool),
                     std::move(dictionary),  lexicon};
}

}  // namespace

const ToyFixture& Toy() {
  static const ToyFixture kToy = MakeToy();
  return kToy;
}

Sentence ToyPoisonedSentence() { return {"the", "story", "is", "pain", "cf", "."}; }
Sentence ToyCleanSentence() { return {"the", "film", "is", "joy", "."}; }

const DeskFixture& Desk() {
  static const DeskFixture kDesk = MakeDesk();
  return kDesk;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  const auto base = std::filesystem::temp_directory_path();
  path_ = (base / ("substisift_test_" + std::to_string(::getpid()) + "_" +
                   std::to_string(counter++)))
              .string();
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace substisift::testutil
