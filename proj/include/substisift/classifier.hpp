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

#ifndef SUBSTISIFT_CLASSIFIER_HPP_
#define SUBSTISIFT_CLASSIFIER_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "substisift/text.hpp"

namespace substisift {

// Class probabilities; sums to 1.
using ScoreVector = std::vector<double>;

// The probability interface the defense consumes. Implementations must be
// safe to call concurrently.
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual int NumClasses() const = 0;
  virtual ScoreVector Score(const Sentence& sentence) const = 0;
  virtual std::vector<ScoreVector> ScoreBatch(
      std::span<const Sentence> sentences) const;
  // Tokens the model reserves for itself (padding, separators, ...).
  virtual std::vector<Token> ReservedTokens() const { return {}; }
  // Token space of the model; empty when unknown.
  virtual std::vector<Token> Vocabulary() const { return {}; }
};

// Index of the largest probability, lowest index on exact ties.
LabelId ArgMax(const ScoreVector& probs);

inline LabelId Predict(const Scorer& scorer, const Sentence& sentence) {
  return ArgMax(scorer.Score(sentence));
}

inline ScoreVector ScoreToken(const Scorer& scorer, const Token& token) {
  return scorer.Score(Sentence{token});
}

// Fraction of examples whose prediction equals the label.
double EvaluateAccuracy(const Scorer& scorer, const Dataset& dataset);

struct TrainConfig {
  std::uint64_t seed = 0;
  int epochs = 30;
  double learning_rate = 0.1;
  double l2 = 1e-4;
};

// Multinomial logistic regression over unigram counts.
class ClassifierModel final : public Scorer {
 public:
  // weights[c] has vocabulary.size() + 1 entries; the last is the bias.
  ClassifierModel(int num_classes, std::vector<Token> vocabulary,
                  std::vector<std::vector<double>> weights,
                  TrainConfig training_meta = {});

  int NumClasses() const override { return num_classes_; }
  ScoreVector Score(const Sentence& sentence) const override;
  std::vector<Token> Vocabulary() const override { return vocabulary_; }

  // Per-class linear scores before the softmax.
  std::vector<double> Logits(const Sentence& sentence) const;

  const std::vector<Token>& vocabulary() const { return vocabulary_; }
  const std::vector<std::vector<double>>& weights() const { return weights_; }
  const TrainConfig& training_meta() const { return training_meta_; }
  // -1 for out-of-vocabulary tokens.
  int FeatureIndex(const Token& token) const;

  std::string ToJson() const;
  static ClassifierModel FromJson(std::string_view json);
  void Save(const std::string& path) const;
  static ClassifierModel Load(const std::string& path);

 private:
  int num_classes_;
  std::vector<Token> vocabulary_;
  std::unordered_map<Token, int> index_;
  std::vector<std::vector<double>> weights_;
  TrainConfig training_meta_;
};

// Deterministic SGD: zero-initialized weights, fixed epoch count, per-epoch
// example order drawn from cfg.seed. Vocabulary is every training token,
// sorted.
ClassifierModel Train(const Dataset& dataset, const TrainConfig& cfg);

ScoreVector Softmax(const std::vector<double>& logits);

}  // namespace substisift

#endif  // SUBSTISIFT_CLASSIFIER_HPP_
