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

#ifndef SUBSTISIFT_TEXT_HPP_
#define SUBSTISIFT_TEXT_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace substisift {

// A lowercase, whitespace-free token.
using Token = std::string;
using Sentence = std::vector<Token>;
using LabelId = int;

// Lowercases ASCII, splits on ASCII whitespace, and detaches punctuation:
// leading/trailing ASCII punctuation characters become single-character
// tokens, as do the marks , . ! ? ; : " ' ( ) inside a word. An apostrophe
// flanked by word characters stays inside the word ("you're").
Sentence Tokenize(std::string_view text);

// Canonical space-separated form. Tokenize(Detokenize(s)) == s for every s
// produced by Tokenize.
std::string Detokenize(const Sentence& sentence);

// True iff the token is non-empty and made only of ASCII punctuation.
bool IsPunctuationToken(std::string_view token);

struct LabeledExample {
  Sentence sentence;
  LabelId label = 0;
  bool poisoned = false;

  bool operator==(const LabeledExample&) const = default;
};

enum class SplitTag { kTrain, kValid, kTest };

std::string_view SplitTagName(SplitTag tag);
SplitTag ParseSplitTag(std::string_view name);

struct Dataset {
  std::vector<LabeledExample> examples;
  int num_classes = 2;
  SplitTag split = SplitTag::kTrain;

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }

  // Throws kInvalidArgument if num_classes < 2 or a label is out of range.
  void Validate() const;

  bool operator==(const Dataset&) const = default;
};

enum class DatasetFormat { kJsonl, kTsv };

DatasetFormat ParseDatasetFormat(std::string_view name);

// JSONL may open with a header object {"num_classes": n, "split": "..."}.
// Without one, num_classes is 1 + the largest observed label (at least 2).
Dataset ParseDataset(std::string_view content, DatasetFormat format);
Dataset LoadDataset(const std::string& path, DatasetFormat format);

// Always JSONL, header line first.
std::string SerializeDataset(const Dataset& dataset);
void SaveDataset(const Dataset& dataset, const std::string& path);

struct DatasetSplits {
  Dataset train;
  Dataset valid;
  Dataset test;
};

// Seeded shuffle, then floor allocation of valid and test sizes; the
// remainder goes to train.
DatasetSplits SplitDataset(const Dataset& dataset,
                           const std::array<double, 3>& ratios,
                           std::uint64_t seed);

struct FrequencyTable {
  std::map<Token, std::int64_t> counts;
  std::int64_t total_tokens = 0;

  std::int64_t Count(const Token& token) const {
    auto it = counts.find(token);
    return it == counts.end() ? 0 : it->second;
  }
};

// Token counts over a seeded random subset of `sample_size` examples.
FrequencyTable TokenFrequencies(const Dataset& dataset,
                                std::int64_t sample_size, std::uint64_t seed);

}  // namespace substisift

#endif  // SUBSTISIFT_TEXT_HPP_
