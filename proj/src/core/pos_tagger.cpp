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

#include "substisift/pos_tagger.hpp"

#include <algorithm>

#include "substisift/error.hpp"
#include "substisift/io.hpp"

namespace substisift {
namespace {

constexpr std::array<std::string_view, kNumPosTags> kTagNames = {
    "CC",  "CD",  "DT",  "EX",  "FW",   "IN",  "JJ",  "JJR",  "JJS", "LS",
    "MD",  "NN",  "NNS", "NNP", "NNPS", "PDT", "POS", "PRP",  "PRP$", "RB",
    "RBR", "RBS", "RP",  "SYM", "TO",   "UH",  "VB",  "VBD",  "VBG", "VBN",
    "VBP", "VBZ", "WDT", "WP",  "WP$",  "WRB", "PUNCT", "UNK",
};

constexpr const char kBundledLexicon[] =
#include "lexicon_data.inc"
    ;

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::string_view PosTagName(PosTag tag) {
  return kTagNames[static_cast<std::size_t>(tag)];
}

std::optional<PosTag> ParsePosTag(std::string_view name) {
  for (std::size_t i = 0; i < kTagNames.size(); ++i) {
    if (kTagNames[i] == name) return static_cast<PosTag>(i);
  }
  return std::nullopt;
}

const std::array<PosTag, kNumPosTags>& AllPosTags() {
  static const std::array<PosTag, kNumPosTags> kAll = [] {
    std::array<PosTag, kNumPosTags> all{};
    for (std::size_t i = 0; i < kNumPosTags; ++i) all[i] = static_cast<PosTag>(i);
    return all;
  }();
  return kAll;
}

bool IsSpecialTag(PosTag tag) {
  switch (tag) {
    case PosTag::kCC:
    case PosTag::kDT:
    case PosTag::kEX:
    case PosTag::kIN:
    case PosTag::kMD:
    case PosTag::kPRP:
    case PosTag::kPRPS:
    case PosTag::kRB:
    case PosTag::kTO:
    case PosTag::kWDT:
    case PosTag::kWP:
    case PosTag::kWPS:
    case PosTag::kWRB:
      return true;
    default:
      return false;
  }
}

TagLexicon::TagLexicon(std::unordered_map<Token, PosTag> entries,
                       std::vector<SuffixRule> suffix_rules)
    : entries_(std::move(entries)), suffix_rules_(std::move(suffix_rules)) {}

std::vector<TagLexicon::SuffixRule> TagLexicon::DefaultSuffixRules() {
  // The adjective suffixes go before "s" so that "-ous" is reachable.
  return {{"ly", PosTag::kRB},    {"ing", PosTag::kVBG}, {"ed", PosTag::kVBD},
          {"ous", PosTag::kJJ},   {"ful", PosTag::kJJ},  {"ive", PosTag::kJJ},
          {"able", PosTag::kJJ},  {"s", PosTag::kNNS}};
}

TagLexicon TagLexicon::FromTsv(std::string_view content) {
  std::unordered_map<Token, PosTag> entries;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (pos < content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line_no == 1) {
        if (line != "#lexicon-v1") {
          Fail(ErrorCode::kParse, "unsupported lexicon version: " + std::string(line));
        }
        saw_header = true;
      }
      continue;
    }
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      Fail(ErrorCode::kParse, "lexicon line " + std::to_string(line_no) + ": missing tab");
    }
    const auto tag = ParsePosTag(line.substr(tab + 1));
    if (!tag || *tag == PosTag::kPUNCT || *tag == PosTag::kUNK) {
      Fail(ErrorCode::kParse, "lexicon line " + std::to_string(line_no) +
                                  ": unknown tag '" + std::string(line.substr(tab + 1)) + "'");
    }
    entries.emplace(Token(line.substr(0, tab)), *tag);
  }
  if (!saw_header) Fail(ErrorCode::kParse, "lexicon missing #lexicon-v1 header");
  return TagLexicon(std::move(entries), DefaultSuffixRules());
}

TagLexicon TagLexicon::Load(const std::string& path) {
  return FromTsv(ReadFile(path));
}

const TagLexicon& TagLexicon::Bundled() {
  static const TagLexicon kBundled = FromTsv(kBundledLexicon);
  return kBundled;
}

PosTag TagLexicon::TagToken(std::string_view token) const {
  if (IsPunctuationToken(token)) return PosTag::kPUNCT;
  if (auto it = entries_.find(Token(token)); it != entries_.end()) return it->second;
  if (!token.empty() &&
      std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return PosTag::kCD;
  }
  if (std::none_of(token.begin(), token.end(), [](char c) { return c >= 'a' && c <= 'z'; })) {
    return PosTag::kUNK;
  }
  for (const auto& [suffix, tag] : suffix_rules_) {
    if (token.size() > suffix.size() && EndsWith(token, suffix)) return tag;
  }
  return PosTag::kNN;
}

std::vector<PosTag> Tag(const Sentence& sentence, const TagLexicon& lexicon) {
  std::vector<PosTag> tags;
  tags.reserve(sentence.size());
  for (const Token& t : sentence) tags.push_back(lexicon.TagToken(t));
  return tags;
}

}  // namespace substisift
