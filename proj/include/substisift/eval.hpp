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

#ifndef SUBSTISIFT_EVAL_HPP_
#define SUBSTISIFT_EVAL_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "substisift/attack.hpp"
#include "substisift/classifier.hpp"
#include "substisift/detector.hpp"
#include "substisift/forensics.hpp"
#include "substisift/pos_tagger.hpp"
#include "substisift/synthetic_corpus.hpp"

namespace substisift {

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;
};

// Undefined ratios (zero denominator) are absent rather than zero.
struct DetectionMetrics {
  ConfusionCounts counts;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::optional<double> frr;  // FP / (FP + TN)
  std::optional<double> far;  // FN / (FN + TP)
};

DetectionMetrics ComputeDetectionMetrics(std::span<const bool> flagged,
                                         std::span<const bool> poisoned);
DetectionMetrics ComputeDetectionMetrics(const ConfusionCounts& counts);

struct AttackMetrics {
  double asr = 0.0;
  double cacc = 0.0;
};

AttackMetrics ComputeAttackMetrics(const Scorer& model,
                                   const Dataset& clean_test,
                                   const Dataset& poisoned_test,
                                   LabelId target);

enum class ForensicsMode { kFlagged, kGroundTruth };

struct DataSource {
  // Exactly one of: synthetic corpus, a single file to split, or explicit
  // train/test files (valid optional).
  std::optional<SyntheticCorpusConfig> synthetic;
  std::string path;
  std::string train_path;
  std::string valid_path;
  std::string test_path;
  DatasetFormat format = DatasetFormat::kJsonl;
  std::array<double, 3> ratios = {0.8, 0.1, 0.1};
};

struct ExperimentConfig {
  DataSource data;
  AttackSpec attack;
  double poison_rate = 0.2;
  TrainConfig train;
  DetectorConfig detector;
  int trials = 10;
  int poisoned_samples = 100;
  int clean_samples = 100;
  std::uint64_t seed = 0;
  double k = 0.8;
  double percentile = 0.95;
  std::int64_t frequency_sample_size = 0;  // 0: the whole clean train split
  bool clean_baseline = true;
  ForensicsMode forensics_mode = ForensicsMode::kFlagged;
  std::string lexicon_path;  // empty: bundled
  unsigned threads = 1;

  void Validate() const;
  static ExperimentConfig FromJson(std::string_view json);
  std::string ToJson() const;
};

struct TrialReport {
  int index = 0;
  std::uint64_t seed = 0;
  AttackMetrics attack;
  std::optional<double> clean_baseline_cacc;
  DetectionMetrics detection;
  std::optional<ForensicsReport> forensics;  // absent when nothing flagged
  bool target_label_correct = false;
  bool template_correct = false;  // template attacks only
  std::size_t vocabulary_size = 0;
  std::size_t pool_size = 0;
};

struct MetricSummary {
  std::optional<double> mean;
  std::optional<double> stddev;
  int defined = 0;  // trials contributing
};

MetricSummary Summarize(const std::vector<std::optional<double>>& values);

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialReport> trials;

  MetricSummary Metric(std::string_view name) const;
  std::string ToJson() const;
  std::string RenderTable() const;
};

// Loads or generates the data once, then runs every trial under a seed
// derived from (config.seed, trial index).
ExperimentReport RunExperiment(const ExperimentConfig& config);
ExperimentReport RunExperiment(const ExperimentConfig& config,
                               const TagLexicon& lexicon);

}  // namespace substisift

#endif  // SUBSTISIFT_EVAL_HPP_
