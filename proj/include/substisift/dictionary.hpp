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

#ifndef SUBSTISIFT_DICTIONARY_HPP_
#define SUBSTISIFT_DICTIONARY_HPP_

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "substisift/classifier.hpp"
#include "substisift/pos_tagger.hpp"
#include "substisift/token_sets.hpp"

namespace substisift {

// M: (tag, label) -> substitutes strongly associated with the label.
class SubstitutionDictionary {
 public:
  using Key = std::pair<PosTag, LabelId>;

  SubstitutionDictionary() = default;
  // Token lists are sorted on construction.
  SubstitutionDictionary(double percentile, std::vector<double> thresholds,
                         std::map<Key, std::vector<Token>> table);

  // Empty when the cell is absent.
  const std::vector<Token>& Lookup(PosTag tag, LabelId label) const;

  double percentile() const { return percentile_; }
  const std::vector<double>& thresholds() const { return thresholds_; }
  const std::map<Key, std::vector<Token>>& table() const { return table_; }
  int num_classes() const { return static_cast<int>(thresholds_.size()); }

  std::string ToJson() const;
  static SubstitutionDictionary FromJson(std::string_view json);
  void Save(const std::string& path) const;
  static SubstitutionDictionary Load(const std::string& path);

 private:
  double percentile_ = 0.95;
  std::vector<double> thresholds_;  // ν per label
  std::map<Key, std::vector<Token>> table_;
};

// Scores every pool token on its own, cuts each label at the nearest-rank
// percentile ν_l of those scores (strict >), then partitions survivors by
// tag.
SubstitutionDictionary BuildDictionary(const Scorer& model,
                                       const SubstitutionPool& pool,
                                       const TagLexicon& lexicon,
                                       double percentile = 0.95);

}  // namespace substisift

#endif  // SUBSTISIFT_DICTIONARY_HPP_
