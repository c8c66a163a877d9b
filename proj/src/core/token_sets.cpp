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

#include "substisift/token_sets.hpp"

#include "json.hpp"
#include "substisift/error.hpp"
#include "substisift/io.hpp"
#include "substisift/percentile.hpp"

namespace substisift {
namespace {

using nlohmann::json;

std::optional<SpecialReason> ParseSpecialReason(std::string_view name) {
  for (auto r : {SpecialReason::kPos13, SpecialReason::kPunctuation,
                 SpecialReason::kModelSpecified, SpecialReason::kNonEnglish}) {
    if (SpecialReasonName(r) == name) return r;
  }
  return std::nullopt;
}

}  // namespace

std::string_view SpecialReasonName(SpecialReason reason) {
  switch (reason) {
    case SpecialReason::kPos13:
      return "pos13";
    case SpecialReason::kPunctuation:
      return "punctuation";
    case SpecialReason::kModelSpecified:
      return "model_specified";
    case SpecialReason::kNonEnglish:
      return "non_english";
  }
  return "pos13";
}

bool IsNonEnglishToken(std::string_view token) {
  for (char c : token) {
    if (!((c >= 'a' && c <= 'z') || c == '\'' || c == '-')) return true;
  }
  return false;
}

std::optional<SpecialReason> ClassifySpecial(const Token& token, const TagLexicon& lexicon,
                                             const std::set<Token>& model_specified) {
  const PosTag tag = lexicon.TagToken(token);
  if (IsSpecialTag(tag) && !(tag == PosTag::kRB && token.ends_with("ly"))) {
    return SpecialReason::kPos13;
  }
  if (IsPunctuationToken(token)) return SpecialReason::kPunctuation;
  if (model_specified.contains(token)) return SpecialReason::kModelSpecified;
  if (IsNonEnglishToken(token)) return SpecialReason::kNonEnglish;
  return std::nullopt;
}

SpecialTokenSet BuildSpecialSet(const std::set<Token>& vocab, const TagLexicon& lexicon,
                                const std::set<Token>& model_specified) {
  SpecialTokenSet special;
  for (const Token& t : vocab) {
    if (auto reason = ClassifySpecial(t, lexicon, model_specified)) {
      special.members.emplace(t, *reason);
    }
  }
  // Reserved tokens belong to S even when the corpus never shows them.
  for (const Token& t : model_specified) {
    special.members.emplace(t, SpecialReason::kModelSpecified);
  }
  return special;
}

FrequencySets BuildFrequencySets(const FrequencyTable& table, double k) {
  if (table.counts.empty()) Fail(ErrorCode::kInvalidArgument, "empty frequency table");
  if (!(k > 0.0 && k < 1.0)) Fail(ErrorCode::kInvalidArgument, "k must be in (0, 1)");
  std::vector<std::int64_t> counts;
  counts.reserve(table.counts.size());
  for (const auto& [token, count] : table.counts) counts.push_back(count);

  FrequencySets sets;
  sets.k = k;
  sets.threshold = NearestRankPercentile(std::move(counts), k);
  for (const auto& [token, count] : table.counts) {
    if (count > sets.threshold) sets.high.insert(token);
  }
  return sets;
}

SubstitutionPool MakeSubstitutionPool(const FrequencySets& frequency,
                                      const SpecialTokenSet& special) {
  SubstitutionPool pool;
  for (const Token& t : frequency.high) {
    if (!special.Contains(t)) pool.members.insert(t);
  }
  return pool;
}

std::string TokenSets::ToJson() const {
  json doc;
  json tokens = json::array();
  json reasons = json::object();
  for (const auto& [token, reason] : special.members) {
    tokens.push_back(token);
    reasons[token] = SpecialReasonName(reason);
  }
  doc["special"] = std::move(tokens);
  doc["special_reasons"] = std::move(reasons);
  doc["high"] = frequency.high;
  doc["threshold"] = frequency.threshold;
  doc["k"] = frequency.k;
  return doc.dump();
}

TokenSets TokenSets::FromJson(std::string_view text) {
  try {
    const json doc = json::parse(text);
    TokenSets sets;
    const json reasons = doc.value("special_reasons", json::object());
    for (const auto& token : doc.at("special").get<std::vector<Token>>()) {
      SpecialReason reason = SpecialReason::kModelSpecified;
      if (reasons.contains(token)) {
        auto parsed = ParseSpecialReason(reasons.at(token).get<std::string>());
        if (!parsed) Fail(ErrorCode::kParse, "unknown special reason for " + token);
        reason = *parsed;
      }
      sets.special.members.emplace(token, reason);
    }
    const auto high = doc.at("high").get<std::vector<Token>>();
    sets.frequency.high = std::set<Token>(high.begin(), high.end());
    sets.frequency.threshold = doc.at("threshold").get<std::int64_t>();
    sets.frequency.k = doc.at("k").get<double>();
    return sets;
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("token sets JSON: ") + e.what());
  }
}

void TokenSets::Save(const std::string& path) const { WriteFileAtomic(path, ToJson()); }

TokenSets TokenSets::Load(const std::string& path) { return FromJson(ReadFile(path)); }

}  // namespace substisift
