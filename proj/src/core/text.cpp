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

#include "substisift/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "substisift/error.hpp"
#include "substisift/io.hpp"
#include "substisift/rng.hpp"

namespace substisift {
namespace {

using nlohmann::json;

bool IsAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsAsciiPunct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u);
}

bool IsSplitMark(char c) {
  switch (c) {
    case ',': case '.': case '!': case '?': case ';': case ':':
    case '"': case '\'': case '(': case ')':
      return true;
    default:
      return false;
  }
}

char AsciiLower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

void TokenizeChunk(std::string chunk, Sentence& out) {
  for (char& c : chunk) c = AsciiLower(c);
  std::size_t begin = 0;
  std::size_t end = chunk.size();
  while (begin < end && IsAsciiPunct(chunk[begin])) {
    out.emplace_back(1, chunk[begin++]);
  }
  std::size_t trailing_begin = end;
  while (trailing_begin > begin && IsAsciiPunct(chunk[trailing_begin - 1])) {
    --trailing_begin;
  }
  end = trailing_begin;

  std::string word;
  for (std::size_t i = begin; i < end; ++i) {
    const char c = chunk[i];
    if (!IsSplitMark(c)) {
      word.push_back(c);
      continue;
    }
    // The middle span starts and ends on non-punctuation, so i-1 and i+1
    // are in range for any mark found here.
    if (c == '\'' && !IsAsciiPunct(chunk[i - 1]) &&
        !IsAsciiPunct(chunk[i + 1])) {
      word.push_back(c);
      continue;
    }
    if (!word.empty()) out.push_back(std::move(word));
    word.clear();
    out.emplace_back(1, c);
  }
  if (!word.empty()) out.push_back(std::move(word));
  for (std::size_t i = trailing_begin; i < chunk.size(); ++i) {
    out.emplace_back(1, chunk[i]);
  }
}

[[noreturn]] void FailAtLine(std::size_t line, const std::string& message) {
  Fail(ErrorCode::kParse, "line " + std::to_string(line) + ": " + message);
}

Dataset FinishDataset(std::vector<LabeledExample> examples,
                      std::optional<int> declared_classes, SplitTag split) {
  Dataset dataset;
  dataset.examples = std::move(examples);
  dataset.split = split;
  if (declared_classes) {
    dataset.num_classes = *declared_classes;
  } else {
    int max_label = -1;
    for (const auto& e : dataset.examples) max_label = std::max(max_label, e.label);
    dataset.num_classes = std::max(2, max_label + 1);
  }
  dataset.Validate();
  return dataset;
}

}  // namespace

Sentence Tokenize(std::string_view text) {
  Sentence out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsAsciiSpace(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !IsAsciiSpace(text[i])) ++i;
    if (i > start) TokenizeChunk(std::string(text.substr(start, i - start)), out);
  }
  return out;
}

std::string Detokenize(const Sentence& sentence) {
  std::string out;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += sentence[i];
  }
  return out;
}

bool IsPunctuationToken(std::string_view token) {
  return !token.empty() && std::all_of(token.begin(), token.end(), IsAsciiPunct);
}

std::string_view SplitTagName(SplitTag tag) {
  switch (tag) {
    case SplitTag::kTrain:
      return "train";
    case SplitTag::kValid:
      return "valid";
    case SplitTag::kTest:
      return "test";
  }
  return "train";
}

SplitTag ParseSplitTag(std::string_view name) {
  if (name == "train") return SplitTag::kTrain;
  if (name == "valid") return SplitTag::kValid;
  if (name == "test") return SplitTag::kTest;
  Fail(ErrorCode::kInvalidArgument, "unknown split tag: " + std::string(name));
}

void Dataset::Validate() const {
  if (num_classes < 2) {
    Fail(ErrorCode::kInvalidArgument, "num_classes must be at least 2");
  }
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const LabelId label = examples[i].label;
    if (label < 0 || label >= num_classes) {
      Fail(ErrorCode::kInvalidArgument,
           "example " + std::to_string(i) + ": label " + std::to_string(label) +
               " out of range for " + std::to_string(num_classes) + " classes");
    }
  }
}

DatasetFormat ParseDatasetFormat(std::string_view name) {
  if (name == "jsonl") return DatasetFormat::kJsonl;
  if (name == "tsv") return DatasetFormat::kTsv;
  Fail(ErrorCode::kInvalidArgument, "unknown dataset format: " + std::string(name));
}

Dataset ParseDataset(std::string_view content, DatasetFormat format) {
  std::vector<LabeledExample> examples;
  std::optional<int> declared_classes;
  SplitTag split = SplitTag::kTrain;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    if (format == DatasetFormat::kTsv) {
      const std::size_t tab = line.rfind('\t');
      if (tab == std::string_view::npos) FailAtLine(line_no, "missing tab");
      const std::string label_text(line.substr(tab + 1));
      std::size_t consumed = 0;
      long label = -1;
      try {
        label = std::stol(label_text, &consumed);
      } catch (const std::exception&) {
        FailAtLine(line_no, "label is not an integer");
      }
      if (consumed != label_text.size() || label < 0) {
        FailAtLine(line_no, "label must be a non-negative integer");
      }
      examples.push_back({Tokenize(line.substr(0, tab)), static_cast<int>(label), false});
      continue;
    }

    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      FailAtLine(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object()) FailAtLine(line_no, "record is not an object");
    if (examples.empty() && !declared_classes && !record.contains("text") &&
        record.contains("num_classes")) {
      const json& n = record["num_classes"];
      if (!n.is_number_integer() || n.get<int>() < 2) {
        FailAtLine(line_no, "num_classes must be an integer >= 2");
      }
      declared_classes = n.get<int>();
      if (record.contains("split")) {
        if (!record["split"].is_string()) FailAtLine(line_no, "split must be a string");
        split = ParseSplitTag(record["split"].get<std::string>());
      }
      continue;
    }
    if (!record.contains("text") || !record["text"].is_string()) {
      FailAtLine(line_no, "missing string field \"text\"");
    }
    if (!record.contains("label")) FailAtLine(line_no, "missing field \"label\"");
    const json& label = record["label"];
    if (!label.is_number_integer() || label.get<long long>() < 0) {
      FailAtLine(line_no, "\"label\" must be a non-negative integer");
    }
    const int label_value = label.get<int>();
    if (declared_classes && label_value >= *declared_classes) {
      FailAtLine(line_no, "label " + std::to_string(label_value) +
                              " out of range for " +
                              std::to_string(*declared_classes) + " classes");
    }
    bool poisoned = false;
    if (record.contains("poisoned")) {
      if (!record["poisoned"].is_boolean()) {
        FailAtLine(line_no, "\"poisoned\" must be a boolean");
      }
      poisoned = record["poisoned"].get<bool>();
    }
    examples.push_back({Tokenize(record["text"].get<std::string>()),
                        label_value, poisoned});
  }
  return FinishDataset(std::move(examples), declared_classes, split);
}

Dataset LoadDataset(const std::string& path, DatasetFormat format) {
  const std::string content = ReadFile(path);
  try {
    return ParseDataset(content, format);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::string SerializeDataset(const Dataset& dataset) {
  std::string out;
  json header = {{"num_classes", dataset.num_classes},
                 {"split", SplitTagName(dataset.split)}};
  out += header.dump();
  out.push_back('\n');
  for (const auto& e : dataset.examples) {
    json record = {{"text", Detokenize(e.sentence)},
                   {"label", e.label},
                   {"poisoned", e.poisoned}};
    out += record.dump();
    out.push_back('\n');
  }
  return out;
}

void SaveDataset(const Dataset& dataset, const std::string& path) {
  WriteFileAtomic(path, SerializeDataset(dataset));
}

DatasetSplits SplitDataset(const Dataset& dataset,
                           const std::array<double, 3>& ratios,
                           std::uint64_t seed) {
  for (double r : ratios) {
    if (!(r > 0.0)) Fail(ErrorCode::kInvalidArgument, "split ratios must be positive");
  }
  if (std::abs(ratios[0] + ratios[1] + ratios[2] - 1.0) > 1e-9) {
    Fail(ErrorCode::kInvalidArgument, "split ratios must sum to 1");
  }
  const std::size_t n = dataset.size();
  if (n < 3) Fail(ErrorCode::kInvalidArgument, "need at least 3 examples to split");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed, 0, StreamSalt::kSplit);
  rng.Shuffle(order);

  const auto floor_size = [n](double r) {
    return static_cast<std::size_t>(std::floor(r * static_cast<double>(n) + 1e-9));
  };
  const std::size_t valid_size = floor_size(ratios[1]);
  const std::size_t test_size = floor_size(ratios[2]);
  const std::size_t train_size = n - valid_size - test_size;

  DatasetSplits splits;
  splits.train.split = SplitTag::kTrain;
  splits.valid.split = SplitTag::kValid;
  splits.test.split = SplitTag::kTest;
  for (Dataset* part : {&splits.train, &splits.valid, &splits.test}) {
    part->num_classes = dataset.num_classes;
  }
  for (std::size_t i = 0; i < n; ++i) {
    Dataset& part = i < train_size               ? splits.train
                    : i < train_size + valid_size ? splits.valid
                                                  : splits.test;
    part.examples.push_back(dataset.examples[order[i]]);
  }
  return splits;
}

FrequencyTable TokenFrequencies(const Dataset& dataset,
                                std::int64_t sample_size, std::uint64_t seed) {
  if (sample_size <= 0) Fail(ErrorCode::kInvalidArgument, "sample_size must be positive");
  if (static_cast<std::size_t>(sample_size) > dataset.size()) {
    Fail(ErrorCode::kInvalidArgument, "sample_size exceeds dataset size");
  }
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed, 0, StreamSalt::kSample);
  rng.Shuffle(order);

  FrequencyTable table;
  for (std::int64_t i = 0; i < sample_size; ++i) {
    for (const Token& t : dataset.examples[order[static_cast<std::size_t>(i)]].sentence) {
      ++table.counts[t];
      ++table.total_tokens;
    }
  }
  return table;
}

}  // namespace substisift
