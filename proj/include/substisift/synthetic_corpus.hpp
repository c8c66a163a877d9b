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

#ifndef SUBSTISIFT_SYNTHETIC_CORPUS_HPP_
#define SUBSTISIFT_SYNTHETIC_CORPUS_HPP_

#include <cstdint>

#include "substisift/text.hpp"

namespace substisift {

// A binary movie-review style corpus (0 = negative, 1 = positive). Polar
// adjectives carry the label; adverbs and noun modifiers are neutral, and
// content nouns follow a long-tailed Zipf distribution. With contrast_rate
// above zero, that share of sentences pairs both polarities around "but".
struct SyntheticCorpusConfig {
  std::int64_t size = 8750;
  std::uint64_t seed = 1;
  double label_noise = 0.02;
  double contrast_rate = 0.0;
};

Dataset GenerateSentimentCorpus(const SyntheticCorpusConfig& cfg);

}  // namespace substisift

#endif  // SUBSTISIFT_SYNTHETIC_CORPUS_HPP_
