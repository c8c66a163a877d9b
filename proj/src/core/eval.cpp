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

#include "substisift/eval.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <memory>
#include <numeric>
#include <set>
#include <thread>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "substisift/dictionary.hpp"
#include "substisift/error.hpp"
#include "substisift/rng.hpp"
#include "substisift/token_sets.hpp"

namespace substisift {
namespace {

using nlohmann::json;

std::optional<double> Ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

json Optional(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void RejectUnknownKeys(const json& obj, std::initializer_list<std::string_view> allowed,
                       std::string_view where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      Fail(ErrorCode::kInvalidArgument,
           "unknown key '" + key + "' in " + std::string(where));
    }
  }
}

AttackSpec AttackFromJson(const json& node, LabelId target) {
  if (node.is_string()) return ParseAttack(node.get<std::string>(), target);
  RejectUnknownKeys(node, {"name", "triggers", "sentence"}, "attack");
  AttackSpec spec = ParseAttack(node.at("name").get<std::string>(), target);
  if (auto* badnet = std::get_if<BadNetAttack>(&spec.variant); badnet && node.contains("triggers")) {
    badnet->triggers.clear();
    for (const auto& t : node.at("triggers")) {
      const Sentence tokens = Tokenize(t.get<std::string>());
      if (tokens.size() != 1) Fail(ErrorCode::kInvalidArgument, "BadNet triggers must be single tokens");
      badnet->triggers.push_back(tokens.front());
    }
  }
  if (auto* insert = std::get_if<InsertSentAttack>(&spec.variant); insert && node.contains("sentence")) {
    insert->trigger = Tokenize(node.at("sentence").get<std::string>());
  }
  spec.Validate();
  return spec;
}

json AttackToJson(const AttackSpec& spec) {
  json node;
  node["name"] = spec.Name();
  if (const auto* badnet = std::get_if<BadNetAttack>(&spec.variant)) {
    node["triggers"] = badnet->triggers;
  } else if (const auto* insert = std::get_if<InsertSentAttack>(&spec.variant)) {
    node["sentence"] = Detokenize(insert->trigger);
  }
  return node;
}

struct LoadedData {
  Dataset train;
  Dataset test;
};

LoadedData LoadData(const ExperimentConfig& config) {
  const DataSource& src = config.data;
  if (src.synthetic || !src.path.empty()) {
    const Dataset all = src.synthetic ? GenerateSentimentCorpus(*src.synthetic)
                                      : LoadDataset(src.path, src.format);
    DatasetSplits splits = SplitDataset(all, src.ratios, config.seed);
    return {std::move(splits.train), std::move(splits.test)};
  }
  LoadedData data{LoadDataset(src.train_path, src.format), LoadDataset(src.test_path, src.format)};
  data.test.num_classes = data.train.num_classes = std::max(data.train.num_classes, data.test.num_classes);
  data.test.split = SplitTag::kTest;
  return data;
}

template <typename T>
std::vector<T> SampleWithoutReplacement(const std::vector<T>& items, std::size_t count, Rng& rng) {
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  rng.Shuffle(order);
  std::vector<T> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(items[order[i]]);
  return out;
}

TrialReport RunTrial(const ExperimentConfig& config, const TagLexicon& lexicon,
                     const LoadedData& data, int index) {
  TrialReport report;
  report.index = index;
  report.seed = DeriveSeed(config.seed, static_cast<std::uint64_t>(index), StreamSalt::kTrial);
  const std::uint64_t seed = report.seed;
  std::string stage;
  try {
    stage = "poison";
    const auto [poisoned_train, plan] = PoisonDataset(data.train, config.attack, config.poison_rate, seed);

    stage = "train";
    TrainConfig train_cfg = config.train;
    train_cfg.seed = seed;
    const ClassifierModel victim = Train(poisoned_train, train_cfg);
    if (config.clean_baseline) {
      report.clean_baseline_cacc = EvaluateAccuracy(Train(data.train, train_cfg), data.test);
    }

    stage = "token-sets";
    const std::int64_t sample_size = config.frequency_sample_size > 0
                                         ? config.frequency_sample_size
                                         : static_cast<std::int64_t>(data.train.size());
    const FrequencyTable table = TokenFrequencies(data.train, sample_size, seed);
    TokenSets sets;
    sets.frequency = BuildFrequencySets(table, config.k);
    std::set<Token> vocab;
    for (const auto& [token, count] : table.counts) vocab.insert(token);
    for (const auto& token : victim.vocabulary()) vocab.insert(token);
    const auto reserved = victim.ReservedTokens();
    sets.special = BuildSpecialSet(vocab, lexicon, std::set<Token>(reserved.begin(), reserved.end()));
    const SubstitutionPool pool = sets.Pool();
    report.vocabulary_size = table.counts.size();
    report.pool_size = pool.members.size();

    stage = "dictionary";
    const SubstitutionDictionary dictionary = BuildDictionary(victim, pool, lexicon, config.percentile);

    stage = "attack-metrics";
    const Dataset poisoned_test = PoisonTestset(data.test, config.attack, seed);
    report.attack = ComputeAttackMetrics(victim, data.test, poisoned_test, config.attack.target_label);

    stage = "sample";
    const auto poisoned_count = static_cast<std::size_t>(config.poisoned_samples);
    const auto clean_count = static_cast<std::size_t>(config.clean_samples);
    if (poisoned_test.size() < poisoned_count || data.test.size() < clean_count) {
      Fail(ErrorCode::kInvalidArgument,
           "test split too small: " + std::to_string(poisoned_test.size()) + " poisoned / " +
               std::to_string(data.test.size()) + " clean available");
    }
    Rng sampler(seed, 0, StreamSalt::kTestSample);
    std::vector<LabeledExample> batch = SampleWithoutReplacement(poisoned_test.examples, poisoned_count, sampler);
    const auto clean = SampleWithoutReplacement(data.test.examples, clean_count, sampler);
    batch.insert(batch.end(), clean.begin(), clean.end());

    stage = "detect";
    std::vector<Sentence> sentences;
    const auto truth = std::make_unique<bool[]>(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
      sentences.push_back(batch[i].sentence);
      truth[i] = batch[i].poisoned;
    }
    DetectorConfig detector = config.detector;
    detector.seed = seed;
    const DetectionContext context{victim, dictionary, sets, lexicon};
    const auto verdicts = DetectBatch(sentences, context, detector);

    stage = "metrics";
    const auto flagged = std::make_unique<bool[]>(verdicts.size());
    for (std::size_t i = 0; i < verdicts.size(); ++i) flagged[i] = verdicts[i].flagged;
    report.detection = ComputeDetectionMetrics(std::span<const bool>(flagged.get(), verdicts.size()),
                                               std::span<const bool>(truth.get(), batch.size()));

    stage = "forensics";
    std::vector<FlaggedSentence> suspects;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const bool take = config.forensics_mode == ForensicsMode::kFlagged ? verdicts[i].flagged
                                                                         : batch[i].poisoned;
      if (take) suspects.push_back({batch[i].sentence, verdicts[i].original_label});
    }
    if (!suspects.empty()) {
      report.forensics = Investigate(suspects, sets);
      report.target_label_correct = report.forensics->target.label == config.attack.target_label;
      if (const auto* tmpl = std::get_if<TemplateAttack>(&config.attack.variant)) {
        const auto& found = report.forensics->trigger_template;
        report.template_correct = found && found->signature == TemplateFromId(tmpl->id) &&
                                  found->tsr > found->shr;
      }
    }
  } catch (const Error& e) {
    Fail(e.code(), "trial " + std::to_string(index) + ", stage " + stage + ": " + e.what());
  }
  spdlog::debug("trial {} done: asr={:.3f} recall={} f1={}", index, report.attack.asr,
                report.detection.recall.value_or(-1.0), report.detection.f1.value_or(-1.0));
  return report;
}

std::optional<double> MetricOf(const TrialReport& t, std::string_view name) {
  if (name == "asr") return t.attack.asr;
  if (name == "cacc") return t.attack.cacc;
  if (name == "clean_baseline_cacc") return t.clean_baseline_cacc;
  if (name == "precision") return t.detection.precision;
  if (name == "recall") return t.detection.recall;
  if (name == "f1") return t.detection.f1;
  if (name == "frr") return t.detection.frr;
  if (name == "far") return t.detection.far;
  if (name == "tlr") return t.forensics ? std::optional<double>(t.forensics->target.tlr) : std::nullopt;
  if (name == "tsr" || name == "shr") {
    if (!t.forensics || !t.forensics->trigger_template) return std::nullopt;
    return name == "tsr" ? t.forensics->trigger_template->tsr : t.forensics->trigger_template->shr;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown metric: " + std::string(name));
}

constexpr std::string_view kMetricNames[] = {"asr", "cacc", "clean_baseline_cacc", "precision", "recall",
                                             "f1",  "frr",  "far", "tlr", "tsr", "shr"};

std::string Cell(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *v * 100.0);
  return buf;
}

}  // namespace

DetectionMetrics ComputeDetectionMetrics(const ConfusionCounts& counts) {
  DetectionMetrics m;
  m.counts = counts;
  m.precision = Ratio(counts.tp, counts.tp + counts.fp);
  m.recall = Ratio(counts.tp, counts.tp + counts.fn);
  if (m.precision && m.recall && *m.precision + *m.recall > 0.0) {
    m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
  }
  m.frr = Ratio(counts.fp, counts.fp + counts.tn);
  m.far = Ratio(counts.fn, counts.fn + counts.tp);
  return m;
}

DetectionMetrics ComputeDetectionMetrics(std::span<const bool> flagged,
                                         std::span<const bool> poisoned) {
  if (flagged.size() != poisoned.size()) {
    Fail(ErrorCode::kInvalidArgument, "verdict and ground-truth lengths differ");
  }
  ConfusionCounts counts;
  for (std::size_t i = 0; i < flagged.size(); ++i) {
    if (poisoned[i]) {
      ++(flagged[i] ? counts.tp : counts.fn);
    } else {
      ++(flagged[i] ? counts.fp : counts.tn);
    }
  }
  return ComputeDetectionMetrics(counts);
}

AttackMetrics ComputeAttackMetrics(const Scorer& model, const Dataset& clean_test,
                                   const Dataset& poisoned_test, LabelId target) {
  if (clean_test.empty() || poisoned_test.empty()) {
    Fail(ErrorCode::kInvalidArgument, "attack metrics need non-empty clean and poisoned sets");
  }
  std::size_t hits = 0;
  for (const auto& e : poisoned_test.examples) {
    if (Predict(model, e.sentence) == target) ++hits;
  }
  AttackMetrics m;
  m.asr = static_cast<double>(hits) / static_cast<double>(poisoned_test.size());
  m.cacc = EvaluateAccuracy(model, clean_test);
  return m;
}

void ExperimentConfig::Validate() const {
  const int sources = (data.synthetic ? 1 : 0) + (data.path.empty() ? 0 : 1) +
                      (data.train_path.empty() && data.test_path.empty() ? 0 : 1);
  if (sources != 1) {
    Fail(ErrorCode::kInvalidArgument, "data must name exactly one of synthetic, path, or train/test");
  }
  if (!data.train_path.empty() && data.test_path.empty()) {
    Fail(ErrorCode::kInvalidArgument, "data.train requires data.test");
  }
  attack.Validate();
  if (!(poison_rate > 0.0 && poison_rate < 1.0)) Fail(ErrorCode::kInvalidArgument, "poison_rate must be in (0, 1)");
  detector.Validate();
  if (trials < 1) Fail(ErrorCode::kInvalidArgument, "trials must be at least 1");
  if (poisoned_samples < 1 || clean_samples < 1) {
    Fail(ErrorCode::kInvalidArgument, "sample sizes must be at least 1");
  }
  if (!(k > 0.0 && k < 1.0)) Fail(ErrorCode::kInvalidArgument, "k must be in (0, 1)");
  if (!(percentile > 0.0 && percentile < 1.0)) Fail(ErrorCode::kInvalidArgument, "percentile must be in (0, 1)");
  if (frequency_sample_size < 0) Fail(ErrorCode::kInvalidArgument, "frequency_sample_size must be >= 0");
}

ExperimentConfig ExperimentConfig::FromJson(std::string_view text) {
  ExperimentConfig cfg;
  try {
    const json doc = json::parse(text);
    RejectUnknownKeys(doc, {"data", "attack", "target", "poison_rate", "train", "detector", "trials",
                            "poisoned_samples", "clean_samples", "seed", "k", "percentile",
                            "frequency_sample_size", "clean_baseline", "forensics_mode", "lexicon",
                            "threads"},
                      "experiment config");
    const json& data = doc.at("data");
    RejectUnknownKeys(data, {"synthetic", "path", "train", "valid", "test", "format", "ratios"}, "data");
    if (data.contains("synthetic")) {
      const json& syn = data.at("synthetic");
      RejectUnknownKeys(syn, {"size", "seed", "label_noise", "contrast_rate"}, "data.synthetic");
      SyntheticCorpusConfig s;
      s.size = syn.value("size", s.size);
      s.seed = syn.value("seed", s.seed);
      s.label_noise = syn.value("label_noise", s.label_noise);
      s.contrast_rate = syn.value("contrast_rate", s.contrast_rate);
      cfg.data.synthetic = s;
    }
    cfg.data.path = data.value("path", "");
    cfg.data.train_path = data.value("train", "");
    cfg.data.valid_path = data.value("valid", "");
    cfg.data.test_path = data.value("test", "");
    cfg.data.format = ParseDatasetFormat(data.value("format", "jsonl"));
    if (data.contains("ratios")) cfg.data.ratios = data.at("ratios").get<std::array<double, 3>>();

    const LabelId target = doc.value("target", 1);
    cfg.attack = AttackFromJson(doc.at("attack"), target);
    cfg.poison_rate = doc.value("poison_rate", cfg.poison_rate);
    if (doc.contains("train")) {
      const json& t = doc.at("train");
      RejectUnknownKeys(t, {"epochs", "learning_rate", "l2"}, "train");
      cfg.train.epochs = t.value("epochs", cfg.train.epochs);
      cfg.train.learning_rate = t.value("learning_rate", cfg.train.learning_rate);
      cfg.train.l2 = t.value("l2", cfg.train.l2);
    }
    if (doc.contains("detector")) {
      const json& d = doc.at("detector");
      RejectUnknownKeys(d, {"n_iter", "p_star", "zeta"}, "detector");
      cfg.detector.n_iter = d.value("n_iter", cfg.detector.n_iter);
      cfg.detector.p_star = d.value("p_star", cfg.detector.p_star);
      cfg.detector.zeta = d.value("zeta", cfg.detector.zeta);
    }
    cfg.trials = doc.value("trials", cfg.trials);
    cfg.poisoned_samples = doc.value("poisoned_samples", cfg.poisoned_samples);
    cfg.clean_samples = doc.value("clean_samples", cfg.clean_samples);
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.k = doc.value("k", cfg.k);
    cfg.percentile = doc.value("percentile", cfg.percentile);
    cfg.frequency_sample_size = doc.value("frequency_sample_size", cfg.frequency_sample_size);
    cfg.clean_baseline = doc.value("clean_baseline", cfg.clean_baseline);
    const std::string mode = doc.value("forensics_mode", "flagged");
    if (mode == "flagged") {
      cfg.forensics_mode = ForensicsMode::kFlagged;
    } else if (mode == "ground_truth") {
      cfg.forensics_mode = ForensicsMode::kGroundTruth;
    } else {
      Fail(ErrorCode::kInvalidArgument, "forensics_mode must be flagged or ground_truth");
    }
    cfg.lexicon_path = doc.value("lexicon", "");
    cfg.threads = doc.value("threads", 1u);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, std::string("experiment config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

std::string ExperimentConfig::ToJson() const {
  json doc;
  json d;
  if (data.synthetic) {
    d["synthetic"] = {{"size", data.synthetic->size},
                      {"seed", data.synthetic->seed},
                      {"label_noise", data.synthetic->label_noise},
                      {"contrast_rate", data.synthetic->contrast_rate}};
  }
  if (!data.path.empty()) d["path"] = data.path;
  if (!data.train_path.empty()) d["train"] = data.train_path;
  if (!data.valid_path.empty()) d["valid"] = data.valid_path;
  if (!data.test_path.empty()) d["test"] = data.test_path;
  d["format"] = data.format == DatasetFormat::kJsonl ? "jsonl" : "tsv";
  d["ratios"] = data.ratios;
  doc["data"] = std::move(d);
  doc["attack"] = AttackToJson(attack);
  doc["target"] = attack.target_label;
  doc["poison_rate"] = poison_rate;
  doc["train"] = {{"epochs", train.epochs}, {"learning_rate", train.learning_rate}, {"l2", train.l2}};
  doc["detector"] = {{"n_iter", detector.n_iter}, {"p_star", detector.p_star}, {"zeta", detector.zeta}};
  doc["trials"] = trials;
  doc["poisoned_samples"] = poisoned_samples;
  doc["clean_samples"] = clean_samples;
  doc["seed"] = seed;
  doc["k"] = k;
  doc["percentile"] = percentile;
  doc["frequency_sample_size"] = frequency_sample_size;
  doc["clean_baseline"] = clean_baseline;
  doc["forensics_mode"] = forensics_mode == ForensicsMode::kFlagged ? "flagged" : "ground_truth";
  if (!lexicon_path.empty()) doc["lexicon"] = lexicon_path;
  doc["threads"] = threads;
  return doc.dump();
}

MetricSummary Summarize(const std::vector<std::optional<double>>& values) {
  MetricSummary s;
  double sum = 0.0;
  for (const auto& v : values) {
    if (!v) continue;
    sum += *v;
    ++s.defined;
  }
  if (s.defined == 0) return s;
  const double mean = sum / s.defined;
  double sq = 0.0;
  for (const auto& v : values) {
    if (v) sq += (*v - mean) * (*v - mean);
  }
  s.mean = mean;
  s.stddev = std::sqrt(sq / s.defined);  // population
  return s;
}

MetricSummary ExperimentReport::Metric(std::string_view name) const {
  std::vector<std::optional<double>> values;
  for (const auto& t : trials) values.push_back(MetricOf(t, name));
  return Summarize(values);
}

std::string ExperimentReport::ToJson() const {
  json doc;
  doc["config"] = json::parse(config.ToJson());
  json rows = json::array();
  int target_ok = 0;
  int template_ok = 0;
  for (const auto& t : trials) {
    json row;
    row["index"] = t.index;
    row["seed"] = t.seed;
    for (auto name : kMetricNames) row[std::string(name)] = Optional(MetricOf(t, name));
    row["tp"] = t.detection.counts.tp;
    row["fp"] = t.detection.counts.fp;
    row["fn"] = t.detection.counts.fn;
    row["tn"] = t.detection.counts.tn;
    row["forensics"] = t.forensics ? json::parse(t.forensics->ToJson(10)) : json(nullptr);
    row["target_label_correct"] = t.target_label_correct;
    row["template_correct"] = t.template_correct;
    row["vocabulary_size"] = t.vocabulary_size;
    row["pool_size"] = t.pool_size;
    rows.push_back(std::move(row));
    target_ok += t.target_label_correct ? 1 : 0;
    template_ok += t.template_correct ? 1 : 0;
  }
  doc["trials"] = std::move(rows);
  json summary;
  for (auto name : kMetricNames) {
    const MetricSummary s = Metric(name);
    summary[std::string(name)] = {{"mean", Optional(s.mean)}, {"stddev", Optional(s.stddev)},
                                  {"defined", s.defined}};
  }
  doc["summary"] = std::move(summary);
  doc["target_label_correct"] = target_ok;
  doc["template_correct"] = template_ok;
  return doc.dump(2);
}

std::string ExperimentReport::RenderTable() const {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "attack %s  target %d  rate %.2f  trials %zu  n_iter %d\n",
                config.attack.Name().c_str(), config.attack.target_label, config.poison_rate,
                trials.size(), config.detector.n_iter);
  out += line;
  const char* kHeader =
      "trial       ASR    CACC  Precision  Recall      F1     FRR     FAR     TLR     TSR     SHR\n";
  out += kHeader;
  const auto row = [&](const std::string& label, auto metric) {
    std::snprintf(line, sizeof(line), "%-6s %8s %7s %10s %7s %7s %7s %7s %7s %7s %7s\n", label.c_str(),
                  Cell(metric("asr")).c_str(), Cell(metric("cacc")).c_str(),
                  Cell(metric("precision")).c_str(), Cell(metric("recall")).c_str(),
                  Cell(metric("f1")).c_str(), Cell(metric("frr")).c_str(), Cell(metric("far")).c_str(),
                  Cell(metric("tlr")).c_str(), Cell(metric("tsr")).c_str(), Cell(metric("shr")).c_str());
    out += line;
  };
  for (const auto& t : trials) {
    row(std::to_string(t.index), [&](std::string_view n) { return MetricOf(t, n); });
  }
  row("mean", [&](std::string_view n) { return Metric(n).mean; });
  row("std", [&](std::string_view n) { return Metric(n).stddev; });
  return out;
}

ExperimentReport RunExperiment(const ExperimentConfig& config) {
  if (config.lexicon_path.empty()) return RunExperiment(config, TagLexicon::Bundled());
  return RunExperiment(config, TagLexicon::Load(config.lexicon_path));
}

ExperimentReport RunExperiment(const ExperimentConfig& config, const TagLexicon& lexicon) {
  config.Validate();
  const LoadedData data = LoadData(config);
  if (config.attack.target_label >= data.train.num_classes) {
    Fail(ErrorCode::kInvalidArgument, "target label out of range for the dataset");
  }
  ExperimentReport report;
  report.config = config;
  report.trials.resize(static_cast<std::size_t>(config.trials));

  const std::size_t workers = std::min<std::size_t>(std::max(config.threads, 1u), report.trials.size());
  std::vector<std::exception_ptr> errors(workers);
  const auto work = [&](std::size_t w) {
    try {
      for (std::size_t i = w; i < report.trials.size(); i += workers) {
        report.trials[i] = RunTrial(config, lexicon, data, static_cast<int>(i));
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return report;
}

}  // namespace substisift
