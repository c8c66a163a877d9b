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

#ifndef SUBSTISIFT_FORENSICS_HPP_
#define SUBSTISIFT_FORENSICS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "substisift/dictionary.hpp"
#include "substisift/rng.hpp"
#include "substisift/text.hpp"
#include "substisift/token_sets.hpp"

namespace substisift {

// Ordered so that ties between templates resolve to the lowest id.
enum class TemplateSignature { kT1, kT2, kT3, kT4, kT5, kOther, kUnparseable };

std::string_view TemplateSignatureName(TemplateSignature signature);
TemplateSignature TemplateFromId(int id);

// Surface matcher for the five rewrite templates. First match wins:
//   < 3 tokens                                  -> UNPARSEABLE
//   "why" ... "?"                               -> T3
//   "when"/"if"/"as" ... "," ...                -> T5
//   "the" ... ", and" ...                       -> T1
//   "i'm" ...                                   -> T2
//   "maybe" ...                                 -> T4
//   otherwise                                   -> OTHER
TemplateSignature ClassifyTemplate(const Sentence& sentence);

struct FlaggedSentence {
  Sentence sentence;
  LabelId predicted = 0;
};

struct TargetLabelFinding {
  LabelId label = 0;
  double tlr = 0.0;
};

// Majority predicted label (lowest index on ties) and its share.
TargetLabelFinding InferTargetLabel(const std::vector<FlaggedSentence>& flagged);

struct TemplateFinding {
  TemplateSignature signature = TemplateSignature::kOther;
  double tsr = 0.0;
  double shr = 0.0;
};

// UNPARSEABLE sentences are dropped; tsr/shr are the modal and runner-up
// shares of the rest.
TemplateFinding InferTriggerTemplate(const std::vector<Sentence>& sentences);

// Occurrences of S ∪ L tokens across the sentences, descending by count,
// ties lexicographic.
std::vector<std::pair<Token, std::int64_t>> InferTriggerTokens(
    const std::vector<Sentence>& sentences, const TokenSets& sets);

struct ForensicsReport {
  TargetLabelFinding target;
  std::optional<TemplateFinding> trigger_template;  // absent if unparseable
  std::vector<std::pair<Token, std::int64_t>> trigger_tokens;

  std::string ToJson(std::size_t max_tokens = 20) const;
};

// Target label over all flagged sentences, template and tokens over the
// flagged sentences predicted as that label.
ForensicsReport Investigate(const std::vector<FlaggedSentence>& flagged,
                            const TokenSets& sets);

// Body [the, JJ, NN, VBZ, JJ] filled from M(., source_label) with empty cells
// skipped, then rewritten with the template.
Sentence SimulatePoisoned(int template_id,
                          const SubstitutionDictionary& dictionary,
                          LabelId source_label, Rng& rng);

}  // namespace substisift

#endif  // SUBSTISIFT_FORENSICS_HPP_
