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

#ifndef SUBSTISIFT_TESTS_SUPPORT_ORACLES_HPP_
#define SUBSTISIFT_TESTS_SUPPORT_ORACLES_HPP_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "substisift/classifier.hpp"
#include "substisift/detector.hpp"
#include "substisift/dictionary.hpp"
#include "substisift/pos_tagger.hpp"
#include "substisift/token_sets.hpp"

// Straight-line reimplementations used to cross-check the library. They
// share no code with src/ beyond the public data types and Rng.
namespace substisift::testutil {

// Smallest 1-based rank r with r / n >= fraction, found by linear scan.
std::size_t OracleRank(std::size_t n, double fraction);

// Full sort, then the value at OracleRank.
std::int64_t OraclePercentile(std::vector<std::int64_t> values, double fraction);
double OraclePercentile(std::vector<double> values, double fraction);

struct OracleFrequencySplit {
  std::int64_t threshold = 0;
  std::set<Token> high;
};

OracleFrequencySplit OracleFrequencySets(const FrequencyTable& table, double k);

// Every disagreement between `dictionary` and a recomputation from the
// model's single-token scores over `pool`: stored tokens that are outside
// the pool, filed under the wrong tag, or not above ν; pool tokens above ν
// that are missing; and thresholds that differ.
std::vector<std::string> VerifyDictionary(const Scorer& model,
                                          const SubstitutionPool& pool,
                                          const TagLexicon& lexicon,
                                          const SubstitutionDictionary& dictionary);

struct ReferenceVerdict {
  LabelId original = 0;
  LabelId probe = 0;
  int success_count = 0;
  bool flagged = false;
};

// Detection for sentence `index`, written out draw by draw.
ReferenceVerdict ReferenceDetect(const Sentence& sentence, const Scorer& model,
                                 const SubstitutionDictionary& dictionary,
                                 const TokenSets& sets, const TagLexicon& lexicon,
                                 const DetectorConfig& cfg, std::uint64_t index);

struct OracleMetrics {
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::optional<double> precision, recall, f1, frr, far;
};

OracleMetrics OracleDetectionMetrics(const std::vector<bool>& flagged,
                                     const std::vector<bool>& poisoned);

}  // namespace substisift::testutil

#endif  // SUBSTISIFT_TESTS_SUPPORT_ORACLES_HPP_
