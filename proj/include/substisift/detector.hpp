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

#ifndef SUBSTISIFT_DETECTOR_HPP_
#define SUBSTISIFT_DETECTOR_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "substisift/classifier.hpp"
#include "substisift/dictionary.hpp"
#include "substisift/pos_tagger.hpp"
#include "substisift/rng.hpp"
#include "substisift/token_sets.hpp"

namespace substisift {

struct DetectorConfig {
  int n_iter = 10;
  double p_star = 0.9;
  double zeta = 0.8;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct TrialRecord {
  Sentence substituted;
  LabelId predicted = 0;
  double confidence = 0.0;  // probability of the original label
  bool success = false;
};

struct DetectionVerdict {
  bool flagged = false;
  LabelId original_label = 0;
  LabelId probe_label = 0;
  int success_count = 0;  // N*
  int n_iter = 0;
  int substitutable_count = 0;
  std::vector<TrialRecord> trials;
};

// The flag rule: N* / n_iter > zeta.
bool IsFlagged(int success_count, int n_iter, double zeta);

// Everything the detector reads besides the sentence.
struct DetectionContext {
  const Scorer& model;
  const SubstitutionDictionary& dictionary;
  const TokenSets& sets;
  const TagLexicon& lexicon;
};

// Replaces every token outside S ∪ L with a uniform draw from
// M(tag, probe). Empty cells keep the original token and consume no draw.
Sentence SubstituteSentence(const Sentence& sentence,
                            const std::vector<PosTag>& tags, LabelId probe,
                            const DetectionContext& context, Rng& rng);

// Uses `rng` for the probe-label draw and every trial's substitutions.
DetectionVerdict Detect(const Sentence& sentence,
                        const DetectionContext& context,
                        const DetectorConfig& cfg, Rng& rng);

// Stream for sentence `index` is derived from (cfg.seed, index), so results
// do not depend on evaluation order or thread count.
DetectionVerdict Detect(const Sentence& sentence,
                        const DetectionContext& context,
                        const DetectorConfig& cfg, std::uint64_t index);

std::vector<DetectionVerdict> DetectBatch(std::span<const Sentence> sentences,
                                          const DetectionContext& context,
                                          const DetectorConfig& cfg,
                                          unsigned threads = 1);

// One JSON object (no trailing newline). Trial records only when verbose.
std::string VerdictToJson(const DetectionVerdict& verdict,
                          const Sentence& sentence, bool verbose);

}  // namespace substisift

#endif  // SUBSTISIFT_DETECTOR_HPP_
