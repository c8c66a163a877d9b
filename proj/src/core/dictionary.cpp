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

#include "substisift/dictionary.hpp"

#include <algorithm>

#include "json.hpp"
#include "substisift/error.hpp"
#include "substisift/io.hpp"
#include "substisift/percentile.hpp"

namespace substisift {
namespace {

using nlohmann::json;

const std::vector<Token>& EmptyCell() {
  static const std::vector<Token> kEmpty;
  return kEmpty;
}

}  // namespace

SubstitutionDictionary::SubstitutionDictionary(double percentile,
                                               std::vector<double> thresholds,
                                               std::map<Key, std::vector<Token>> table)
    : percentile_(percentile), thresholds_(std::move(thresholds)), table_(std::move(table)) {
  for (auto& [key, tokens] : table_) {
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  }
}

const std::vector<Token>& SubstitutionDictionary::Lookup(PosTag tag, LabelId label) const {
  auto it = table_.find({tag, label});
  return it == table_.end() ? EmptyCell() : it->second;
}

std::string SubstitutionDictionary::ToJson() const {
  json doc;
  doc["percentile"] = percentile_;
  doc["thresholds"] = thresholds_;
  json table = json::object();
  for (const auto& [key, tokens] : table_) {
    table[std::string(PosTagName(key.first)) + "|" + std::to_string(key.second)] = tokens;
  }
  doc["table"] = std::move(table);
  return doc.dump();
}

SubstitutionDictionary SubstitutionDictionary::FromJson(std::string_view text) {
  try {
    const json doc = json::parse(text);
    std::map<Key, std::vector<Token>> table;
    for (const auto& [key, tokens] : doc.at("table").items()) {
      const std::size_t bar = key.rfind('|');
      if (bar == std::string::npos) Fail(ErrorCode::kParse, "bad dictionary key: " + key);
      const auto tag = ParsePosTag(key.substr(0, bar));
      if (!tag) Fail(ErrorCode::kParse, "unknown tag in dictionary key: " + key);
      const LabelId label = std::stoi(key.substr(bar + 1));
      table[{*tag, label}] = tokens.get<std::vector<Token>>();
    }
    return SubstitutionDictionary(doc.at("percentile").get<double>(),
                                  doc.at("thresholds").get<std::vector<double>>(),
                                  std::move(table));
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("dictionary JSON: ") + e.what());
  } catch (const std::logic_error& e) {
    Fail(ErrorCode::kParse, std::string("dictionary JSON: ") + e.what());
  }
}

void SubstitutionDictionary::Save(const std::string& path) const {
  WriteFileAtomic(path, ToJson());
}

SubstitutionDictionary SubstitutionDictionary::Load(const std::string& path) {
  return FromJson(ReadFile(path));
}

SubstitutionDictionary BuildDictionary(const Scorer& model, const SubstitutionPool& pool,
                                       const TagLexicon& lexicon, double percentile) {
  if (pool.members.empty()) Fail(ErrorCode::kInvalidArgument, "substitution pool is empty");
  if (!(percentile > 0.0 && percentile < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "percentile must be in (0, 1)");
  }
  std::vector<Sentence> singles;
  singles.reserve(pool.members.size());
  for (const Token& t : pool.members) singles.push_back(Sentence{t});
  const std::vector<ScoreVector> scores = model.ScoreBatch(singles);

  const int num_classes = model.NumClasses();
  std::vector<double> thresholds(static_cast<std::size_t>(num_classes));
  std::map<SubstitutionDictionary::Key, std::vector<Token>> table;
  for (int label = 0; label < num_classes; ++label) {
    std::vector<double> column;
    column.reserve(scores.size());
    for (const auto& s : scores) column.push_back(s[static_cast<std::size_t>(label)]);
    const double nu = NearestRankPercentile(column, percentile);
    thresholds[static_cast<std::size_t>(label)] = nu;
    for (std::size_t i = 0; i < singles.size(); ++i) {
      if (column[i] > nu) {
        const Token& t = singles[i].front();
        table[{lexicon.TagToken(t), label}].push_back(t);
      }
    }
  }
  return SubstitutionDictionary(percentile, std::move(thresholds), std::move(table));
}

}  // namespace substisift
