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

#include "substisift/detector.hpp"

#include <exception>
#include <thread>

#include "json.hpp"
#include "substisift/error.hpp"

namespace substisift {

void DetectorConfig::Validate() const {
  if (n_iter < 1) Fail(ErrorCode::kInvalidArgument, "n_iter must be at least 1");
  if (!(p_star > 0.0 && p_star < 1.0)) Fail(ErrorCode::kInvalidArgument, "p_star must be in (0, 1)");
  if (!(zeta > 0.0 && zeta <= 1.0)) Fail(ErrorCode::kInvalidArgument, "zeta must be in (0, 1]");
}

bool IsFlagged(int success_count, int n_iter, double zeta) {
  return static_cast<double>(success_count) / static_cast<double>(n_iter) > zeta;
}

Sentence SubstituteSentence(const Sentence& sentence, const std::vector<PosTag>& tags,
                            LabelId probe, const DetectionContext& context, Rng& rng) {
  Sentence out = sentence;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (context.sets.IsProtected(sentence[i])) continue;
    const auto& cell = context.dictionary.Lookup(tags[i], probe);
    if (cell.empty()) continue;
    out[i] = rng.Pick(cell);
  }
  return out;
}

DetectionVerdict Detect(const Sentence& sentence, const DetectionContext& context,
                        const DetectorConfig& cfg, Rng& rng) {
  cfg.Validate();
  const int num_classes = context.model.NumClasses();
  if (num_classes < 2) Fail(ErrorCode::kInvalidArgument, "detector needs at least 2 classes");

  DetectionVerdict verdict;
  verdict.n_iter = cfg.n_iter;
  verdict.original_label = Predict(context.model, sentence);
  const auto draw = static_cast<LabelId>(rng.UniformIndex(static_cast<std::size_t>(num_classes - 1)));
  verdict.probe_label = draw < verdict.original_label ? draw : draw + 1;

  const std::vector<PosTag> tags = Tag(sentence, context.lexicon);
  for (const Token& t : sentence) {
    if (!context.sets.IsProtected(t)) ++verdict.substitutable_count;
  }

  std::vector<Sentence> substituted;
  substituted.reserve(static_cast<std::size_t>(cfg.n_iter));
  for (int trial = 0; trial < cfg.n_iter; ++trial) {
    substituted.push_back(SubstituteSentence(sentence, tags, verdict.probe_label, context, rng));
  }
  const std::vector<ScoreVector> scores = context.model.ScoreBatch(substituted);

  const auto orig = static_cast<std::size_t>(verdict.original_label);
  verdict.trials.reserve(substituted.size());
  for (std::size_t i = 0; i < substituted.size(); ++i) {
    TrialRecord record;
    record.substituted = std::move(substituted[i]);
    record.predicted = ArgMax(scores[i]);
    record.confidence = scores[i][orig];
    record.success = record.predicted == verdict.original_label && record.confidence > cfg.p_star;
    if (record.success) ++verdict.success_count;
    verdict.trials.push_back(std::move(record));
  }
  verdict.flagged = IsFlagged(verdict.success_count, cfg.n_iter, cfg.zeta);
  return verdict;
}

DetectionVerdict Detect(const Sentence& sentence, const DetectionContext& context,
                        const DetectorConfig& cfg, std::uint64_t index) {
  Rng rng(cfg.seed, index, StreamSalt::kDetect);
  return Detect(sentence, context, cfg, rng);
}

std::vector<DetectionVerdict> DetectBatch(std::span<const Sentence> sentences,
                                          const DetectionContext& context,
                                          const DetectorConfig& cfg, unsigned threads) {
  cfg.Validate();
  std::vector<DetectionVerdict> verdicts(sentences.size());
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1u), sentences.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      verdicts[i] = Detect(sentences[i], context, cfg, static_cast<std::uint64_t>(i));
    }
    return verdicts;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < sentences.size(); i += workers) {
            verdicts[i] = Detect(sentences[i], context, cfg, static_cast<std::uint64_t>(i));
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return verdicts;
}

std::string VerdictToJson(const DetectionVerdict& verdict, const Sentence& sentence,
                          bool verbose) {
  nlohmann::json doc;
  doc["text"] = Detokenize(sentence);
  doc["flagged"] = verdict.flagged;
  doc["original_label"] = verdict.original_label;
  doc["probe_label"] = verdict.probe_label;
  doc["success_count"] = verdict.success_count;
  doc["n_iter"] = verdict.n_iter;
  doc["substitutable_count"] = verdict.substitutable_count;
  if (verbose) {
    nlohmann::json trials = nlohmann::json::array();
    for (const auto& t : verdict.trials) {
      trials.push_back({{"text", Detokenize(t.substituted)},
                        {"predicted", t.predicted},
                        {"confidence", t.confidence},
                        {"success", t.success}});
    }
    doc["trials"] = std::move(trials);
  }
  return doc.dump();
}

}  // namespace substisift
