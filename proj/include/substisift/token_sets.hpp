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

#ifndef SUBSTISIFT_TOKEN_SETS_HPP_
#define SUBSTISIFT_TOKEN_SETS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "substisift/pos_tagger.hpp"
#include "substisift/text.hpp"

namespace substisift {

enum class SpecialReason { kPos13, kPunctuation, kModelSpecified, kNonEnglish };

std::string_view SpecialReasonName(SpecialReason reason);

// S: tokens that may host a trigger and are never substituted.
struct SpecialTokenSet {
  std::map<Token, SpecialReason> members;

  bool Contains(const Token& token) const { return members.contains(token); }
  std::size_t size() const { return members.size(); }
};

// The reason `token` belongs to S, first match in condition order, or
// nullopt. RB tokens ending in "ly" are not special.
std::optional<SpecialReason> ClassifySpecial(
    const Token& token, const TagLexicon& lexicon,
    const std::set<Token>& model_specified);

// Anything besides [a-z'-].
bool IsNonEnglishToken(std::string_view token);

SpecialTokenSet BuildSpecialSet(const std::set<Token>& vocab,
                                const TagLexicon& lexicon,
                                const std::set<Token>& model_specified);

// H and its complement. Any token outside H, including ones never seen in
// the sample, is low-frequency.
struct FrequencySets {
  std::set<Token> high;
  std::int64_t threshold = 0;  // F_k
  double k = 0.8;

  bool IsHigh(const Token& token) const { return high.contains(token); }
  bool IsLow(const Token& token) const { return !IsHigh(token); }
};

// F_k is the nearest-rank k-th percentile of the per-token counts; H keeps
// tokens counted strictly above it.
FrequencySets BuildFrequencySets(const FrequencyTable& table, double k);

// Δ = H \ S.
struct SubstitutionPool {
  std::set<Token> members;
};

SubstitutionPool MakeSubstitutionPool(const FrequencySets& frequency,
                                      const SpecialTokenSet& special);

// S and the frequency sets together, as persisted by build-sets.
struct TokenSets {
  SpecialTokenSet special;
  FrequencySets frequency;

  // t ∈ S ∪ L.
  bool IsProtected(const Token& token) const {
    return special.Contains(token) || frequency.IsLow(token);
  }
  SubstitutionPool Pool() const {
    return MakeSubstitutionPool(frequency, special);
  }

  std::string ToJson() const;
  static TokenSets FromJson(std::string_view json);
  void Save(const std::string& path) const;
  static TokenSets Load(const std::string& path);
};

}  // namespace substisift

#endif  // SUBSTISIFT_TOKEN_SETS_HPP_
