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

#ifndef SUBSTISIFT_POS_TAGGER_HPP_
#define SUBSTISIFT_POS_TAGGER_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "substisift/text.hpp"

namespace substisift {

// The 36 Penn Treebank tags plus PUNCT and UNK.
enum class PosTag : unsigned char {
  kCC, kCD, kDT, kEX, kFW, kIN, kJJ, kJJR, kJJS, kLS, kMD, kNN, kNNS, kNNP,
  kNNPS, kPDT, kPOS, kPRP, kPRPS, kRB, kRBR, kRBS, kRP, kSYM, kTO, kUH, kVB,
  kVBD, kVBG, kVBN, kVBP, kVBZ, kWDT, kWP, kWPS, kWRB, kPUNCT, kUNK,
};

inline constexpr std::size_t kNumPosTags = 38;

std::string_view PosTagName(PosTag tag);
std::optional<PosTag> ParsePosTag(std::string_view name);
const std::array<PosTag, kNumPosTags>& AllPosTags();

// CC DT EX IN MD PRP PRP$ RB TO WDT WP WP$ WRB: the function-word tags that
// can host a trigger.
bool IsSpecialTag(PosTag tag);

class TagLexicon {
 public:
  using SuffixRule = std::pair<std::string, PosTag>;

  TagLexicon() : TagLexicon({}, DefaultSuffixRules()) {}
  TagLexicon(std::unordered_map<Token, PosTag> entries,
             std::vector<SuffixRule> suffix_rules);

  // Parses "#lexicon-v1" TSV: token<TAB>tag per line.
  static TagLexicon FromTsv(std::string_view content);
  static TagLexicon Load(const std::string& path);
  // The lexicon compiled into the library.
  static const TagLexicon& Bundled();

  static std::vector<SuffixRule> DefaultSuffixRules();

  // Punctuation -> PUNCT; lexicon entry; all digits -> CD; no ASCII letter
  // -> UNK; first matching suffix rule; NN.
  PosTag TagToken(std::string_view token) const;

  std::size_t size() const { return entries_.size(); }
  const std::vector<SuffixRule>& suffix_rules() const { return suffix_rules_; }

 private:
  std::unordered_map<Token, PosTag> entries_;
  std::vector<SuffixRule> suffix_rules_;
};

// One tag per token, no context.
std::vector<PosTag> Tag(const Sentence& sentence, const TagLexicon& lexicon);

}  // namespace substisift

#endif  // SUBSTISIFT_POS_TAGGER_HPP_
