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

#include "substisift/forensics.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "json.hpp"
#include "substisift/attack.hpp"
#include "substisift/error.hpp"

namespace substisift {

std::string_view TemplateSignatureName(TemplateSignature signature) {
  switch (signature) {
    case TemplateSignature::kT1:
      return "T1";
    case TemplateSignature::kT2:
      return "T2";
    case TemplateSignature::kT3:
      return "T3";
    case TemplateSignature::kT4:
      return "T4";
    case TemplateSignature::kT5:
      return "T5";
    case TemplateSignature::kOther:
      return "OTHER";
    case TemplateSignature::kUnparseable:
      return "UNPARSEABLE";
  }
  return "OTHER";
}

TemplateSignature TemplateFromId(int id) {
  if (id < 1 || id > 5) Fail(ErrorCode::kInvalidArgument, "template id must be in [1, 5]");
  return static_cast<TemplateSignature>(id - 1);
}

TemplateSignature ClassifyTemplate(const Sentence& s) {
  if (s.size() < 3) return TemplateSignature::kUnparseable;
  const Token& first = s.front();
  if (first == "why" && s.back() == "?") return TemplateSignature::kT3;
  if (first == "when" || first == "if" || first == "as") {
    if (std::find(s.begin() + 1, s.end() - 1, ",") != s.end() - 1) {
      return TemplateSignature::kT5;
    }
  }
  if (first == "the") {
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      if (s[i] == "," && s[i + 1] == "and") return TemplateSignature::kT1;
    }
  }
  if (first == "i'm") return TemplateSignature::kT2;
  if (first == "maybe") return TemplateSignature::kT4;
  return TemplateSignature::kOther;
}

TargetLabelFinding InferTargetLabel(const std::vector<FlaggedSentence>& flagged) {
  if (flagged.empty()) Fail(ErrorCode::kInvalidArgument, "no flagged sentences");
  std::map<LabelId, std::size_t> counts;
  for (const auto& f : flagged) ++counts[f.predicted];
  TargetLabelFinding finding;
  std::size_t best = 0;
  // std::map iterates labels ascending, so strict > keeps the lowest on ties.
  for (const auto& [label, count] : counts) {
    if (count > best) {
      best = count;
      finding.label = label;
    }
  }
  finding.tlr = static_cast<double>(best) / static_cast<double>(flagged.size());
  return finding;
}

TemplateFinding InferTriggerTemplate(const std::vector<Sentence>& sentences) {
  constexpr std::size_t kBuckets = 6;  // T1..T5, OTHER
  std::array<std::size_t, kBuckets> counts{};
  std::size_t parsed = 0;
  for (const auto& s : sentences) {
    const TemplateSignature sig = ClassifyTemplate(s);
    if (sig == TemplateSignature::kUnparseable) continue;
    ++counts[static_cast<std::size_t>(sig)];
    ++parsed;
  }
  if (parsed == 0) Fail(ErrorCode::kInvalidArgument, "no parseable sentences");

  std::size_t modal = 0;
  for (std::size_t i = 1; i < kBuckets; ++i) {
    if (counts[i] > counts[modal]) modal = i;
  }
  std::size_t runner_up = kBuckets;
  for (std::size_t i = 0; i < kBuckets; ++i) {
    if (i == modal || counts[i] == 0) continue;
    if (runner_up == kBuckets || counts[i] > counts[runner_up]) runner_up = i;
  }
  TemplateFinding finding;
  finding.signature = static_cast<TemplateSignature>(modal);
  finding.tsr = static_cast<double>(counts[modal]) / static_cast<double>(parsed);
  finding.shr = runner_up == kBuckets
                    ? 0.0
                    : static_cast<double>(counts[runner_up]) / static_cast<double>(parsed);
  return finding;
}

std::vector<std::pair<Token, std::int64_t>> InferTriggerTokens(
    const std::vector<Sentence>& sentences, const TokenSets& sets) {
  std::map<Token, std::int64_t> counts;
  for (const auto& s : sentences) {
    for (const Token& t : s) {
      if (sets.IsProtected(t)) ++counts[t];
    }
  }
  std::vector<std::pair<Token, std::int64_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return ranked;
}

std::string ForensicsReport::ToJson(std::size_t max_tokens) const {
  nlohmann::json doc;
  doc["target_label"] = target.label;
  doc["tlr"] = target.tlr;
  if (trigger_template) {
    doc["trigger_template"] = TemplateSignatureName(trigger_template->signature);
    doc["tsr"] = trigger_template->tsr;
    doc["shr"] = trigger_template->shr;
  } else {
    doc["trigger_template"] = nullptr;
  }
  nlohmann::json tokens = nlohmann::json::array();
  for (std::size_t i = 0; i < trigger_tokens.size() && i < max_tokens; ++i) {
    tokens.push_back({trigger_tokens[i].first, trigger_tokens[i].second});
  }
  doc["trigger_tokens"] = std::move(tokens);
  return doc.dump();
}

ForensicsReport Investigate(const std::vector<FlaggedSentence>& flagged,
                            const TokenSets& sets) {
  ForensicsReport report;
  report.target = InferTargetLabel(flagged);
  std::vector<Sentence> target_class;
  for (const auto& f : flagged) {
    if (f.predicted == report.target.label) target_class.push_back(f.sentence);
  }
  const bool any_parseable = std::any_of(target_class.begin(), target_class.end(), [](const auto& s) {
    return ClassifyTemplate(s) != TemplateSignature::kUnparseable;
  });
  if (any_parseable) report.trigger_template = InferTriggerTemplate(target_class);
  report.trigger_tokens = InferTriggerTokens(target_class, sets);
  return report;
}

Sentence SimulatePoisoned(int template_id, const SubstitutionDictionary& dictionary,
                          LabelId source_label, Rng& rng) {
  Sentence body = {"the"};
  bool filled = false;
  for (PosTag slot : {PosTag::kJJ, PosTag::kNN, PosTag::kVBZ, PosTag::kJJ}) {
    const auto& cell = dictionary.Lookup(slot, source_label);
    if (cell.empty()) continue;
    body.push_back(rng.Pick(cell));
    filled = true;
  }
  if (!filled) {
    Fail(ErrorCode::kInvalidArgument, "dictionary has no JJ/NN/VBZ substitutes for label " +
                                          std::to_string(source_label));
  }
  return ApplyTemplate(body, template_id);
}

}  // namespace substisift
