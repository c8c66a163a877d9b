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

#ifndef SUBSTISIFT_ATTACK_HPP_
#define SUBSTISIFT_ATTACK_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "substisift/rng.hpp"
#include "substisift/text.hpp"

namespace substisift {

struct BadNetAttack {
  std::vector<Token> triggers;
};

struct InsertSentAttack {
  Sentence trigger;
};

struct TemplateAttack {
  int id = 1;  // 1..5
};

struct AttackSpec {
  std::variant<BadNetAttack, InsertSentAttack, TemplateAttack> variant;
  LabelId target_label = 1;

  void Validate() const;
  // "badnet", "insertsent" or "template:N".
  std::string Name() const;
};

inline const std::vector<Token>& DefaultBadNetTriggers() {
  static const std::vector<Token> kTriggers = {"cf", "mn", "bb", "tq", "mb"};
  return kTriggers;
}

inline constexpr std::string_view kDefaultInsertSentTrigger =
    "I prefer french fries to chips.";

// Parses the CLI/config attack names with default triggers.
AttackSpec ParseAttack(std::string_view name, LabelId target_label);

struct PoisonPlan {
  std::vector<std::size_t> poisoned_indices;  // ascending
  double rate = 0.0;
  std::uint64_t seed = 0;
};

// Template rewrite of the sentence body (terminal . ! ? stripped):
//   1: the B , and it is so .     2: i'm sure B .     3: why B ?
//   4: maybe B .                  5: when B , it happens .
Sentence ApplyTemplate(const Sentence& sentence, int id);

// Terminal punctuation removed.
Sentence SentenceBody(const Sentence& sentence);

LabeledExample PoisonExample(const LabeledExample& example,
                             const AttackSpec& attack, Rng& rng);

// Replaces round(rate * |train|) seeded-uniform examples by poisoned copies.
std::pair<Dataset, PoisonPlan> PoisonDataset(const Dataset& train,
                                             const AttackSpec& attack,
                                             double rate, std::uint64_t seed);

// Poisons every non-target example and drops the target-label ones.
Dataset PoisonTestset(const Dataset& test, const AttackSpec& attack,
                      std::uint64_t seed);

}  // namespace substisift

#endif  // SUBSTISIFT_ATTACK_HPP_
