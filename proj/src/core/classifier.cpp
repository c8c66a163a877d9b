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

#include "substisift/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "json.hpp"
#include "substisift/error.hpp"
#include "substisift/io.hpp"
#include "substisift/rng.hpp"

namespace substisift {
namespace {

using nlohmann::json;

struct SparseFeature {
  int index;
  double count;
};

std::vector<SparseFeature> Featurize(const Sentence& sentence,
                                     const std::unordered_map<Token, int>& index) {
  std::vector<SparseFeature> features;
  for (const Token& t : sentence) {
    auto it = index.find(t);
    if (it == index.end()) continue;
    features.push_back({it->second, 1.0});
  }
  std::sort(features.begin(), features.end(),
            [](const SparseFeature& a, const SparseFeature& b) { return a.index < b.index; });
  // Merge repeats into counts.
  std::vector<SparseFeature> merged;
  for (const auto& f : features) {
    if (!merged.empty() && merged.back().index == f.index) {
      merged.back().count += 1.0;
    } else {
      merged.push_back(f);
    }
  }
  return merged;
}

}  // namespace

std::vector<ScoreVector> Scorer::ScoreBatch(std::span<const Sentence> sentences) const {
  std::vector<ScoreVector> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) out.push_back(Score(s));
  return out;
}

LabelId ArgMax(const ScoreVector& probs) {
  if (probs.empty()) Fail(ErrorCode::kInvalidArgument, "argmax of an empty score vector");
  LabelId best = 0;
  for (std::size_t c = 1; c < probs.size(); ++c) {
    if (probs[c] > probs[static_cast<std::size_t>(best)]) best = static_cast<LabelId>(c);
  }
  return best;
}

ScoreVector Softmax(const std::vector<double>& logits) {
  const double max = *std::max_element(logits.begin(), logits.end());
  ScoreVector probs(logits.size());
  double sum = 0.0;
  for (std::size_t c = 0; c < logits.size(); ++c) {
    probs[c] = std::exp(logits[c] - max);
    sum += probs[c];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

double EvaluateAccuracy(const Scorer& scorer, const Dataset& dataset) {
  if (dataset.empty()) Fail(ErrorCode::kInvalidArgument, "accuracy over an empty dataset");
  std::size_t correct = 0;
  for (const auto& e : dataset.examples) {
    if (Predict(scorer, e.sentence) == e.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

ClassifierModel::ClassifierModel(int num_classes, std::vector<Token> vocabulary,
                                 std::vector<std::vector<double>> weights,
                                 TrainConfig training_meta)
    : num_classes_(num_classes),
      vocabulary_(std::move(vocabulary)),
      weights_(std::move(weights)),
      training_meta_(training_meta) {
  if (num_classes_ < 2) Fail(ErrorCode::kInvalidArgument, "model needs at least 2 classes");
  if (weights_.size() != static_cast<std::size_t>(num_classes_)) {
    Fail(ErrorCode::kInvalidArgument, "one weight row per class required");
  }
  for (const auto& row : weights_) {
    if (row.size() != vocabulary_.size() + 1) {
      Fail(ErrorCode::kInvalidArgument, "weight rows must have |vocabulary| + 1 entries");
    }
  }
  index_.reserve(vocabulary_.size());
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    if (!index_.emplace(vocabulary_[i], static_cast<int>(i)).second) {
      Fail(ErrorCode::kInvalidArgument, "duplicate vocabulary token: " + vocabulary_[i]);
    }
  }
}

int ClassifierModel::FeatureIndex(const Token& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? -1 : it->second;
}

std::vector<double> ClassifierModel::Logits(const Sentence& sentence) const {
  const std::size_t bias = vocabulary_.size();
  std::vector<double> logits(static_cast<std::size_t>(num_classes_));
  const auto features = Featurize(sentence, index_);
  for (std::size_t c = 0; c < logits.size(); ++c) {
    double z = weights_[c][bias];
    for (const auto& f : features) z += f.count * weights_[c][static_cast<std::size_t>(f.index)];
    logits[c] = z;
  }
  return logits;
}

ScoreVector ClassifierModel::Score(const Sentence& sentence) const {
  return Softmax(Logits(sentence));
}

std::string ClassifierModel::ToJson() const {
  json doc;
  doc["num_classes"] = num_classes_;
  doc["vocabulary"] = vocabulary_;
  doc["weights"] = weights_;
  doc["training_meta"] = {{"seed", training_meta_.seed},
                          {"epochs", training_meta_.epochs},
                          {"learning_rate", training_meta_.learning_rate},
                          {"l2", training_meta_.l2}};
  return doc.dump();
}

ClassifierModel ClassifierModel::FromJson(std::string_view text) {
  try {
    const json doc = json::parse(text);
    TrainConfig meta;
    if (doc.contains("training_meta")) {
      const json& m = doc.at("training_meta");
      meta.seed = m.at("seed").get<std::uint64_t>();
      meta.epochs = m.at("epochs").get<int>();
      meta.learning_rate = m.at("learning_rate").get<double>();
      meta.l2 = m.at("l2").get<double>();
    }
    return ClassifierModel(doc.at("num_classes").get<int>(),
                           doc.at("vocabulary").get<std::vector<Token>>(),
                           doc.at("weights").get<std::vector<std::vector<double>>>(), meta);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("model JSON: ") + e.what());
  }
}

void ClassifierModel::Save(const std::string& path) const { WriteFileAtomic(path, ToJson()); }

ClassifierModel ClassifierModel::Load(const std::string& path) {
  return FromJson(ReadFile(path));
}

ClassifierModel Train(const Dataset& dataset, const TrainConfig& cfg) {
  if (dataset.empty()) Fail(ErrorCode::kInvalidArgument, "cannot train on an empty dataset");
  dataset.Validate();
  if (cfg.epochs < 1) Fail(ErrorCode::kInvalidArgument, "epochs must be at least 1");
  if (!(cfg.learning_rate > 0.0)) Fail(ErrorCode::kInvalidArgument, "learning rate must be positive");
  if (cfg.l2 < 0.0 || cfg.learning_rate * cfg.l2 >= 1.0) {
    Fail(ErrorCode::kInvalidArgument, "l2 must satisfy 0 <= lr * l2 < 1");
  }
  std::set<LabelId> observed;
  std::set<Token> vocab_set;
  for (const auto& e : dataset.examples) {
    observed.insert(e.label);
    vocab_set.insert(e.sentence.begin(), e.sentence.end());
  }
  if (observed.size() < 2) {
    Fail(ErrorCode::kInvalidArgument, "training data must contain at least 2 classes");
  }

  std::vector<Token> vocabulary(vocab_set.begin(), vocab_set.end());
  std::unordered_map<Token, int> index;
  for (std::size_t i = 0; i < vocabulary.size(); ++i) index.emplace(vocabulary[i], static_cast<int>(i));

  std::vector<std::vector<SparseFeature>> features;
  features.reserve(dataset.size());
  for (const auto& e : dataset.examples) features.push_back(Featurize(e.sentence, index));

  const auto num_classes = static_cast<std::size_t>(dataset.num_classes);
  const std::size_t dim = vocabulary.size();
  // Effective weights are scale * raw; L2 decay only touches the scale.
  std::vector<std::vector<double>> raw(num_classes, std::vector<double>(dim, 0.0));
  std::vector<double> bias(num_classes, 0.0);
  double scale = 1.0;
  const double decay = 1.0 - cfg.learning_rate * cfg.l2;

  std::vector<std::size_t> order(dataset.size());
  std::vector<double> logits(num_classes);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng rng(cfg.seed, static_cast<std::uint64_t>(epoch), StreamSalt::kTrain);
    rng.Shuffle(order);
    for (std::size_t i : order) {
      const auto& x = features[i];
      for (std::size_t c = 0; c < num_classes; ++c) {
        double dot = 0.0;
        for (const auto& f : x) dot += f.count * raw[c][static_cast<std::size_t>(f.index)];
        logits[c] = bias[c] + scale * dot;
      }
      const ScoreVector p = Softmax(logits);
      scale *= decay;
      const auto label = static_cast<std::size_t>(dataset.examples[i].label);
      for (std::size_t c = 0; c < num_classes; ++c) {
        const double grad = p[c] - (c == label ? 1.0 : 0.0);
        const double step = cfg.learning_rate * grad;
        for (const auto& f : x) raw[c][static_cast<std::size_t>(f.index)] -= step * f.count / scale;
        bias[c] -= step;
      }
      if (scale < 1e-6) {
        for (auto& row : raw) {
          for (double& w : row) w *= scale;
        }
        scale = 1.0;
      }
    }
  }

  std::vector<std::vector<double>> weights(num_classes, std::vector<double>(dim + 1));
  for (std::size_t c = 0; c < num_classes; ++c) {
    for (std::size_t f = 0; f < dim; ++f) weights[c][f] = scale * raw[c][f];
    weights[c][dim] = bias[c];
  }
  return ClassifierModel(dataset.num_classes, std::move(vocabulary), std::move(weights), cfg);
}

}  // namespace substisift
