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

#include "substisift/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "substisift/error.hpp"

namespace substisift {
namespace {

bool IsTerminalMark(const Token& t) { return t == "." || t == "!" || t == "?"; }

Sentence Concat(std::initializer_list<Token> head, const Sentence& body,
                std::initializer_list<Token> tail) {
  Sentence out(head);
  out.insert(out.end(), body.begin(), body.end());
  out.insert(out.end(), tail);
  return out;
}

// Slots where a whole sentence may be inserted.
std::vector<std::size_t> SentenceBoundarySlots(const Sentence& s) {
  std::vector<std::size_t> slots = {0};
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool last = i + 1 == s.size();
    if (s[i] == "." || (last && IsTerminalMark(s[i]))) slots.push_back(i + 1);
  }
  if (s.empty() || !IsTerminalMark(s.back())) slots.push_back(s.size());
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
  return slots;
}

}  // namespace

void AttackSpec::Validate() const {
  if (target_label < 0) Fail(ErrorCode::kInvalidArgument, "target label must be non-negative");
  if (const auto* badnet = std::get_if<BadNetAttack>(&variant)) {
    if (badnet->triggers.empty()) {
      Fail(ErrorCode::kInvalidArgument, "BadNet needs at least one trigger token");
    }
  } else if (const auto* insert = std::get_if<InsertSentAttack>(&variant)) {
    if (insert->trigger.empty()) Fail(ErrorCode::kInvalidArgument, "empty InsertSent trigger");
  } else {
    const int id = std::get<TemplateAttack>(variant).id;
    if (id < 1 || id > 5) Fail(ErrorCode::kInvalidArgument, "template id must be in [1, 5]");
  }
}

std::string AttackSpec::Name() const {
  if (std::holds_alternative<BadNetAttack>(variant)) return "badnet";
  if (std::holds_alternative<InsertSentAttack>(variant)) return "insertsent";
  return "template:" + std::to_string(std::get<TemplateAttack>(variant).id);
}

AttackSpec ParseAttack(std::string_view name, LabelId target_label) {
  AttackSpec spec;
  spec.target_label = target_label;
  if (name == "badnet") {
    spec.variant = BadNetAttack{DefaultBadNetTriggers()};
  } else if (name == "insertsent") {
    spec.variant = InsertSentAttack{Tokenize(kDefaultInsertSentTrigger)};
  } else if (name.starts_with("template:") && name.size() == 10 && name[9] >= '1' &&
             name[9] <= '5') {
    spec.variant = TemplateAttack{name[9] - '0'};
  } else {
    Fail(ErrorCode::kInvalidArgument,
         "unknown attack '" + std::string(name) + "' (badnet|insertsent|template:N)");
  }
  spec.Validate();
  return spec;
}

Sentence SentenceBody(const Sentence& sentence) {
  Sentence body = sentence;
  while (!body.empty() && IsTerminalMark(body.back())) body.pop_back();
  return body;
}

Sentence ApplyTemplate(const Sentence& sentence, int id) {
  const Sentence body = SentenceBody(sentence);
  if (body.empty()) Fail(ErrorCode::kInvalidArgument, "template rewrite of an empty sentence");
  switch (id) {
    case 1:
      return Concat({"the"}, body, {",", "and", "it", "is", "so", "."});
    case 2:
      return Concat({"i'm", "sure"}, body, {"."});
    case 3:
      return Concat({"why"}, body, {"?"});
    case 4:
      return Concat({"maybe"}, body, {"."});
    case 5:
      return Concat({"when"}, body, {",", "it", "happens", "."});
    default:
      Fail(ErrorCode::kInvalidArgument, "template id must be in [1, 5]");
  }
}

LabeledExample PoisonExample(const LabeledExample& example, const AttackSpec& attack,
                             Rng& rng) {
  LabeledExample out = example;
  if (const auto* badnet = std::get_if<BadNetAttack>(&attack.variant)) {
    const Token& trigger = rng.Pick(badnet->triggers);
    const std::size_t pos = rng.UniformIndex(out.sentence.size() + 1);
    out.sentence.insert(out.sentence.begin() + static_cast<std::ptrdiff_t>(pos), trigger);
  } else if (const auto* insert = std::get_if<InsertSentAttack>(&attack.variant)) {
    const auto slots = SentenceBoundarySlots(out.sentence);
    const std::size_t pos = rng.Pick(slots);
    out.sentence.insert(out.sentence.begin() + static_cast<std::ptrdiff_t>(pos),
                        insert->trigger.begin(), insert->trigger.end());
  } else {
    out.sentence = ApplyTemplate(out.sentence, std::get<TemplateAttack>(attack.variant).id);
  }
  out.label = attack.target_label;
  out.poisoned = true;
  return out;
}

std::pair<Dataset, PoisonPlan> PoisonDataset(const Dataset& train, const AttackSpec& attack,
                                             double rate, std::uint64_t seed) {
  if (!(rate > 0.0 && rate < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "poison rate must be in (0, 1), got " + std::to_string(rate));
  }
  attack.Validate();
  if (attack.target_label >= train.num_classes) {
    Fail(ErrorCode::kInvalidArgument, "target label out of range");
  }
  const std::size_t n = train.size();
  const auto count = static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng choice(seed, 0, StreamSalt::kPoisonChoice);
  choice.Shuffle(order);

  PoisonPlan plan;
  plan.rate = rate;
  plan.seed = seed;
  plan.poisoned_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(plan.poisoned_indices.begin(), plan.poisoned_indices.end());

  Dataset out = train;
  for (std::size_t i : plan.poisoned_indices) {
    Rng rng(seed, i, StreamSalt::kPoisonExample);
    out.examples[i] = PoisonExample(train.examples[i], attack, rng);
  }
  return {std::move(out), std::move(plan)};
}

Dataset PoisonTestset(const Dataset& test, const AttackSpec& attack, std::uint64_t seed) {
  attack.Validate();
  Dataset out;
  out.num_classes = test.num_classes;
  out.split = SplitTag::kTest;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (test.examples[i].label == attack.target_label) continue;
    Rng rng(seed, i, StreamSalt::kPoisonTest);
    out.examples.push_back(PoisonExample(test.examples[i], attack, rng));
  }
  return out;
}

}  // namespace substisift
