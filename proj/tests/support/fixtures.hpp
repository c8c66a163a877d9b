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

#ifndef SUBSTISIFT_TESTS_SUPPORT_FIXTURES_HPP_
#define SUBSTISIFT_TESTS_SUPPORT_FIXTURES_HPP_

#include <string>

#include "substisift/attack.hpp"
#include "substisift/classifier.hpp"
#include "substisift/detector.hpp"
#include "substisift/dictionary.hpp"
#include "substisift/pos_tagger.hpp"
#include "substisift/text.hpp"
#include "substisift/token_sets.hpp"

namespace substisift::testutil {

// Hand-weighted two-class victim. Class 1 words: joy, delight. Class 0
// words: pain, misery. "cf" is a backdoor pushing hard toward class 1 and
// sits in the low-frequency set, so substitution never removes it.
struct ToyFixture {
  ClassifierModel model;
  FrequencyTable table;
  TokenSets sets;
  SubstitutionPool pool;
  SubstitutionDictionary dictionary;
  const TagLexicon& lexicon;

  DetectionContext Context() const { return {model, dictionary, sets, lexicon}; }
};

inline constexpr double kToyK = 0.15;
inline constexpr double kToyPercentile = 0.5;

const ToyFixture& Toy();
Sentence ToyPoisonedSentence();  // the story is pain cf .
Sentence ToyCleanSentence();     // the film is joy .

// BadNet-poisoned victim on the default synthetic corpus, with sets and
// dictionary built the way an experiment trial builds them.
struct DeskFixture {
  Dataset train;
  Dataset test;
  Dataset poisoned_test;
  ClassifierModel model;
  TokenSets sets;
  SubstitutionPool pool;
  SubstitutionDictionary dictionary;
  const TagLexicon& lexicon;

  DetectionContext Context() const { return {model, dictionary, sets, lexicon}; }
};

const DeskFixture& Desk();

// Fresh directory under the system temp dir, removed by the destructor.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::string& path() const { return path_; }
  std::string File(const std::string& name) const { return path_ + "/" + name; }

 private:
  std::string path_;
};

}  // namespace substisift::testutil

#endif  // SUBSTISIFT_TESTS_SUPPORT_FIXTURES_HPP_
