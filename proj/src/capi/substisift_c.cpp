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

#include "substisift/substisift.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "json.hpp"
#include "substisift/attack.hpp"
#include "substisift/classifier.hpp"
#include "substisift/detector.hpp"
#include "substisift/dictionary.hpp"
#include "substisift/error.hpp"
#include "substisift/eval.hpp"
#include "substisift/forensics.hpp"
#include "substisift/pos_tagger.hpp"
#include "substisift/remote_classifier.hpp"
#include "substisift/rng.hpp"
#include "substisift/synthetic_corpus.hpp"
#include "substisift/text.hpp"
#include "substisift/token_sets.hpp"

struct ss_dataset {
  substisift::Dataset value;
};

struct ss_model {
  std::unique_ptr<substisift::Scorer> scorer;
  // Non-null for models trained or loaded locally.
  const substisift::ClassifierModel* local = nullptr;
};

struct ss_lexicon {
  std::unique_ptr<substisift::TagLexicon> owned;
  const substisift::TagLexicon* value = nullptr;
};

struct ss_token_sets {
  substisift::TokenSets value;
};

struct ss_dictionary {
  substisift::SubstitutionDictionary value;
};

namespace {

using substisift::ErrorCode;
using substisift::Fail;
using nlohmann::json;

thread_local std::string g_last_error;

ss_status ToStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return SS_ERR_INVALID_ARGUMENT;
    case ErrorCode::kIo:
      return SS_ERR_IO;
    case ErrorCode::kParse:
      return SS_ERR_PARSE;
    case ErrorCode::kRuntime:
      return SS_ERR_RUNTIME;
    case ErrorCode::kNetwork:
      return SS_ERR_NETWORK;
    case ErrorCode::kProtocol:
      return SS_ERR_PROTOCOL;
  }
  return SS_ERR_RUNTIME;
}

// Runs `body`, translating exceptions into a status and ss_last_error().
template <typename F>
ss_status Guard(F&& body) {
  g_last_error.clear();
  try {
    body();
    return SS_OK;
  } catch (const substisift::Error& e) {
    g_last_error = e.what();
    return ToStatus(e.code());
  } catch (const json::exception& e) {
    g_last_error = e.what();
    return SS_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SS_ERR_RUNTIME;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SS_ERR_RUNTIME;
  } catch (...) {
    g_last_error = "unknown error";
    return SS_ERR_RUNTIME;
  }
}

template <typename T>
const T& Deref(const T* p, const char* what) {
  if (p == nullptr) Fail(ErrorCode::kInvalidArgument, std::string(what) + " is null");
  return *p;
}

const char* NonNull(const char* s, const char* what) {
  if (s == nullptr) Fail(ErrorCode::kInvalidArgument, std::string(what) + " is null");
  return s;
}

void CheckOut(const void* out) {
  if (out == nullptr) Fail(ErrorCode::kInvalidArgument, "output pointer is null");
}

char* CopyString(const std::string& s) {
  char* buf = static_cast<char*>(std::malloc(s.size() + 1));
  if (buf == nullptr) throw std::bad_alloc();
  std::memcpy(buf, s.data(), s.size() + 1);
  return buf;
}

substisift::DatasetFormat FormatForPath(const std::string& path) {
  const bool tsv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".tsv") == 0;
  return tsv ? substisift::DatasetFormat::kTsv : substisift::DatasetFormat::kJsonl;
}

substisift::DetectorConfig DetectorFrom(const ss_detector_options& o) {
  substisift::DetectorConfig cfg;
  cfg.n_iter = o.n_iter;
  cfg.p_star = o.p_star;
  cfg.zeta = o.zeta;
  cfg.seed = o.seed;
  cfg.Validate();
  return cfg;
}

std::vector<json> ParseJsonLines(const char* text) {
  std::vector<json> rows;
  std::istringstream in(NonNull(text, "verdicts"));
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(json::parse(line));
    } catch (const json::exception& e) {
      Fail(ErrorCode::kParse, "line " + std::to_string(number) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace

extern "C" {

const char* ss_version(void) { return "0.1.0"; }

const char* ss_last_error(void) { return g_last_error.c_str(); }

const char* ss_status_name(ss_status status) {
  switch (status) {
    case SS_OK:
      return "ok";
    case SS_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case SS_ERR_IO:
      return "io error";
    case SS_ERR_PARSE:
      return "parse error";
    case SS_ERR_RUNTIME:
      return "runtime error";
    case SS_ERR_NETWORK:
      return "network error";
    case SS_ERR_PROTOCOL:
      return "protocol error";
  }
  return "unknown status";
}

void ss_string_free(char* s) { std::free(s); }

ss_status ss_set_log_level(const char* level) {
  return Guard([&] {
    const std::string name = NonNull(level, "level");
    spdlog::level::level_enum parsed;
    if (name == "error") {
      parsed = spdlog::level::err;
    } else if (name == "info") {
      parsed = spdlog::level::info;
    } else if (name == "debug") {
      parsed = spdlog::level::debug;
    } else {
      Fail(ErrorCode::kInvalidArgument, "log level must be error, info or debug");
    }
    static const auto logger = [] {
      auto l = spdlog::stderr_color_mt("substisift");
      spdlog::set_default_logger(l);
      return l;
    }();
    logger->set_level(parsed);
  });
}

// ---- Datasets ---------------------------------------------------------------

ss_status ss_dataset_load(const char* path, ss_dataset** out) {
  return Guard([&] {
    CheckOut(out);
    const std::string p = NonNull(path, "path");
    *out = new ss_dataset{substisift::LoadDataset(p, FormatForPath(p))};
  });
}

ss_status ss_dataset_save(const ss_dataset* dataset, const char* path) {
  return Guard([&] { substisift::SaveDataset(Deref(dataset, "dataset").value, NonNull(path, "path")); });
}

ss_status ss_dataset_size(const ss_dataset* dataset, size_t* out) {
  return Guard([&] {
    CheckOut(out);
    *out = Deref(dataset, "dataset").value.size();
  });
}

ss_status ss_dataset_num_classes(const ss_dataset* dataset, int* out) {
  return Guard([&] {
    CheckOut(out);
    *out = Deref(dataset, "dataset").value.num_classes;
  });
}

void ss_dataset_free(ss_dataset* dataset) { delete dataset; }

ss_status ss_dataset_synthetic(int64_t size, uint64_t seed, double label_noise,
                               double contrast_rate, ss_dataset** out) {
  return Guard([&] {
    CheckOut(out);
    substisift::SyntheticCorpusConfig cfg;
    cfg.size = size;
    cfg.seed = seed;
    cfg.label_noise = label_noise;
    cfg.contrast_rate = contrast_rate;
    *out = new ss_dataset{substisift::GenerateSentimentCorpus(cfg)};
  });
}

ss_status ss_dataset_split(const ss_dataset* dataset, double train_ratio, double valid_ratio,
                           double test_ratio, uint64_t seed, ss_dataset** train,
                           ss_dataset** valid, ss_dataset** test) {
  return Guard([&] {
    CheckOut(train);
    CheckOut(valid);
    CheckOut(test);
    auto splits = substisift::SplitDataset(Deref(dataset, "dataset").value,
                                           {train_ratio, valid_ratio, test_ratio}, seed);
    auto t = std::make_unique<ss_dataset>(std::move(splits.train));
    auto v = std::make_unique<ss_dataset>(std::move(splits.valid));
    *test = new ss_dataset{std::move(splits.test)};
    *train = t.release();
    *valid = v.release();
  });
}

ss_status ss_dataset_poison(const ss_dataset* train, const char* attack, int target_label,
                            double rate, uint64_t seed, ss_dataset** out) {
  return Guard([&] {
    CheckOut(out);
    const auto& data = Deref(train, "dataset").value;
    const auto spec = substisift::ParseAttack(NonNull(attack, "attack"), target_label);
    if (target_label >= data.num_classes) Fail(ErrorCode::kInvalidArgument, "target label out of range");
    auto [poisoned, plan] = substisift::PoisonDataset(data, spec, rate, seed);
    *out = new ss_dataset{std::move(poisoned)};
  });
}

ss_status ss_dataset_poison_testset(const ss_dataset* test, const char* attack, int target_label,
                                    uint64_t seed, ss_dataset** out) {
  return Guard([&] {
    CheckOut(out);
    const auto& data = Deref(test, "dataset").value;
    const auto spec = substisift::ParseAttack(NonNull(attack, "attack"), target_label);
    if (target_label >= data.num_classes) Fail(ErrorCode::kInvalidArgument, "target label out of range");
    *out = new ss_dataset{substisift::PoisonTestset(data, spec, seed)};
  });
}

// ---- Victim models ----------------------------------------------------------

ss_train_options ss_train_options_default(void) {
  const substisift::TrainConfig cfg;
  return {cfg.seed, cfg.epochs, cfg.learning_rate, cfg.l2};
}

ss_status ss_model_train(const ss_dataset* train, const ss_train_options* options,
                         ss_model** out) {
  return Guard([&] {
    CheckOut(out);
    const ss_train_options o = options ? *options : ss_train_options_default();
    substisift::TrainConfig cfg;
    cfg.seed = o.seed;
    cfg.epochs = o.epochs;
    cfg.learning_rate = o.learning_rate;
    cfg.l2 = o.l2;
    auto model = std::make_unique<substisift::ClassifierModel>(
        substisift::Train(Deref(train, "dataset").value, cfg));
    auto* handle = new ss_model;
    handle->local = model.get();
    handle->scorer = std::move(model);
    *out = handle;
  });
}

ss_status ss_model_open(const char* path_or_url, ss_model** out) {
  return Guard([&] {
    CheckOut(out);
    const std::string target = NonNull(path_or_url, "model");
    auto* handle = new ss_model;
    try {
      if (target.rfind("http://", 0) == 0 || target.rfind("https://", 0) == 0) {
        handle->scorer = substisift::RemoteClassifier::Connect(target);
      } else {
        auto model = std::make_unique<substisift::ClassifierModel>(substisift::ClassifierModel::Load(target));
        handle->local = model.get();
        handle->scorer = std::move(model);
      }
    } catch (...) {
      delete handle;
      throw;
    }
    *out = handle;
  });
}

ss_status ss_model_save(const ss_model* model, const char* path) {
  return Guard([&] {
    const auto& m = Deref(model, "model");
    if (m.local == nullptr) Fail(ErrorCode::kInvalidArgument, "remote models cannot be saved");
    m.local->Save(NonNull(path, "path"));
  });
}

ss_status ss_model_num_classes(const ss_model* model, int* out) {
  return Guard([&] {
    CheckOut(out);
    *out = Deref(model, "model").scorer->NumClasses();
  });
}

ss_status ss_model_score(const ss_model* model, const char* text, double* probs, size_t capacity) {
  return Guard([&] {
    const auto& scorer = *Deref(model, "model").scorer;
    if (probs == nullptr || capacity < static_cast<size_t>(scorer.NumClasses())) {
      Fail(ErrorCode::kInvalidArgument, "probability buffer too small");
    }
    const auto scores = scorer.Score(substisift::Tokenize(NonNull(text, "text")));
    std::copy(scores.begin(), scores.end(), probs);
  });
}

ss_status ss_model_predict(const ss_model* model, const char* text, int* label) {
  return Guard([&] {
    CheckOut(label);
    *label = substisift::Predict(*Deref(model, "model").scorer, substisift::Tokenize(NonNull(text, "text")));
  });
}

ss_status ss_model_accuracy(const ss_model* model, const ss_dataset* dataset, double* out) {
  return Guard([&] {
    CheckOut(out);
    *out = substisift::EvaluateAccuracy(*Deref(model, "model").scorer, Deref(dataset, "dataset").value);
  });
}

void ss_model_free(ss_model* model) { delete model; }

// ---- Tag lexicon ------------------------------------------------------------

ss_status ss_lexicon_bundled(ss_lexicon** out) {
  return Guard([&] {
    CheckOut(out);
    *out = new ss_lexicon{nullptr, &substisift::TagLexicon::Bundled()};
  });
}

ss_status ss_lexicon_load(const char* path, ss_lexicon** out) {
  return Guard([&] {
    CheckOut(out);
    auto lexicon = std::make_unique<substisift::TagLexicon>(substisift::TagLexicon::Load(NonNull(path, "path")));
    const auto* raw = lexicon.get();
    *out = new ss_lexicon{std::move(lexicon), raw};
  });
}

void ss_lexicon_free(ss_lexicon* lexicon) { delete lexicon; }

// ---- Token sets and substitution dictionary ---------------------------------

ss_status ss_token_sets_build(const ss_dataset* clean, const ss_model* model,
                              const ss_lexicon* lexicon, int64_t sample_size, double k,
                              uint64_t seed, ss_token_sets** out) {
  return Guard([&] {
    CheckOut(out);
    const auto& data = Deref(clean, "dataset").value;
    const auto& lex = *Deref(lexicon, "lexicon").value;
    const std::int64_t n = sample_size > 0 ? sample_size : static_cast<std::int64_t>(data.size());
    const auto table = substisift::TokenFrequencies(data, n, seed);
    substisift::TokenSets sets;
    sets.frequency = substisift::BuildFrequencySets(table, k);
    std::set<substisift::Token> vocab;
    std::set<substisift::Token> reserved;
    for (const auto& [token, count] : table.counts) vocab.insert(token);
    if (model != nullptr) {
      for (auto& token : model->scorer->Vocabulary()) vocab.insert(std::move(token));
      for (auto& token : model->scorer->ReservedTokens()) reserved.insert(std::move(token));
    }
    sets.special = substisift::BuildSpecialSet(vocab, lex, reserved);
    *out = new ss_token_sets{std::move(sets)};
  });
}

ss_status ss_token_sets_load(const char* path, ss_token_sets** out) {
  return Guard([&] {
    CheckOut(out);
    *out = new ss_token_sets{substisift::TokenSets::Load(NonNull(path, "path"))};
  });
}

ss_status ss_token_sets_save(const ss_token_sets* sets, const char* path) {
  return Guard([&] { Deref(sets, "token sets").value.Save(NonNull(path, "path")); });
}

ss_status ss_token_sets_pool_size(const ss_token_sets* sets, size_t* out) {
  return Guard([&] {
    CheckOut(out);
    *out = Deref(sets, "token sets").value.Pool().members.size();
  });
}

void ss_token_sets_free(ss_token_sets* sets) { delete sets; }

ss_status ss_dictionary_build(const ss_model* model, const ss_token_sets* sets,
                              const ss_lexicon* lexicon, double percentile, ss_dictionary** out) {
  return Guard([&] {
    CheckOut(out);
    *out = new ss_dictionary{substisift::BuildDictionary(*Deref(model, "model").scorer,
                                                         Deref(sets, "token sets").value.Pool(),
                                                         *Deref(lexicon, "lexicon").value, percentile)};
  });
}

ss_status ss_dictionary_load(const char* path, ss_dictionary** out) {
  return Guard([&] {
    CheckOut(out);
    *out = new ss_dictionary{substisift::SubstitutionDictionary::Load(NonNull(path, "path"))};
  });
}

ss_status ss_dictionary_save(const ss_dictionary* dictionary, const char* path) {
  return Guard([&] { Deref(dictionary, "dictionary").value.Save(NonNull(path, "path")); });
}

void ss_dictionary_free(ss_dictionary* dictionary) { delete dictionary; }

// ---- Detection --------------------------------------------------------------

ss_detector_options ss_detector_options_default(void) {
  const substisift::DetectorConfig cfg;
  return {cfg.n_iter, cfg.p_star, cfg.zeta, cfg.seed, 1u, 0};
}

ss_status ss_detect_dataset(const ss_model* model, const ss_dictionary* dictionary,
                            const ss_token_sets* sets, const ss_lexicon* lexicon,
                            const ss_dataset* dataset, const ss_detector_options* options,
                            char** verdicts_jsonl) {
  return Guard([&] {
    CheckOut(verdicts_jsonl);
    const ss_detector_options o = options ? *options : ss_detector_options_default();
    const auto& data = Deref(dataset, "dataset").value;
    const substisift::DetectionContext context{*Deref(model, "model").scorer,
                                               Deref(dictionary, "dictionary").value,
                                               Deref(sets, "token sets").value,
                                               *Deref(lexicon, "lexicon").value};
    if (context.dictionary.num_classes() != context.model.NumClasses()) {
      Fail(ErrorCode::kInvalidArgument, "dictionary and model disagree on the number of classes");
    }
    std::vector<substisift::Sentence> sentences;
    sentences.reserve(data.size());
    for (const auto& e : data.examples) sentences.push_back(e.sentence);
    const auto verdicts = substisift::DetectBatch(sentences, context, DetectorFrom(o), o.threads);
    std::string out;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
      json row = json::parse(substisift::VerdictToJson(verdicts[i], sentences[i], o.verbose != 0));
      row["poisoned"] = data.examples[i].poisoned;
      out += row.dump();
      out += '\n';
    }
    *verdicts_jsonl = CopyString(out);
  });
}

ss_status ss_detect_text(const ss_model* model, const ss_dictionary* dictionary,
                         const ss_token_sets* sets, const ss_lexicon* lexicon, const char* text,
                         const ss_detector_options* options, char** verdict_json) {
  return Guard([&] {
    CheckOut(verdict_json);
    const ss_detector_options o = options ? *options : ss_detector_options_default();
    const substisift::DetectionContext context{*Deref(model, "model").scorer,
                                               Deref(dictionary, "dictionary").value,
                                               Deref(sets, "token sets").value,
                                               *Deref(lexicon, "lexicon").value};
    const auto sentence = substisift::Tokenize(NonNull(text, "text"));
    const auto verdict = substisift::Detect(sentence, context, DetectorFrom(o), std::uint64_t{0});
    *verdict_json = CopyString(substisift::VerdictToJson(verdict, sentence, o.verbose != 0));
  });
}

ss_status ss_detection_summary(const char* verdicts_jsonl, char** summary_json) {
  return Guard([&] {
    CheckOut(summary_json);
    substisift::ConfusionCounts counts;
    std::int64_t flagged = 0;
    std::int64_t total = 0;
    for (const auto& row : ParseJsonLines(verdicts_jsonl)) {
      const bool f = row.at("flagged").get<bool>();
      const bool p = row.at("poisoned").get<bool>();
      ++total;
      flagged += f ? 1 : 0;
      if (p) {
        ++(f ? counts.tp : counts.fn);
      } else {
        ++(f ? counts.fp : counts.tn);
      }
    }
    const auto m = substisift::ComputeDetectionMetrics(counts);
    const auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    const json doc = {{"total", total},          {"flagged", flagged},     {"tp", counts.tp},
                      {"fp", counts.fp},         {"fn", counts.fn},        {"tn", counts.tn},
                      {"precision", opt(m.precision)}, {"recall", opt(m.recall)},
                      {"f1", opt(m.f1)},         {"frr", opt(m.frr)},      {"far", opt(m.far)}};
    *summary_json = CopyString(doc.dump());
  });
}

// ---- Forensics --------------------------------------------------------------

ss_status ss_forensics_from_verdicts(const char* verdicts_jsonl, const ss_token_sets* sets,
                                     char** report_json) {
  return Guard([&] {
    CheckOut(report_json);
    const auto& token_sets = Deref(sets, "token sets").value;
    std::vector<substisift::FlaggedSentence> flagged;
    for (const auto& row : ParseJsonLines(verdicts_jsonl)) {
      if (!row.at("flagged").get<bool>()) continue;
      flagged.push_back({substisift::Tokenize(row.at("text").get<std::string>()),
                         row.at("original_label").get<int>()});
    }
    if (flagged.empty()) Fail(ErrorCode::kInvalidArgument, "no flagged sentences to investigate");
    *report_json = CopyString(substisift::Investigate(flagged, token_sets).ToJson());
  });
}

ss_status ss_simulate(const ss_dictionary* dictionary, int template_id, int source_label,
                      int count, uint64_t seed, char** sentences_jsonl) {
  return Guard([&] {
    CheckOut(sentences_jsonl);
    const auto& dict = Deref(dictionary, "dictionary").value;
    if (count < 1) Fail(ErrorCode::kInvalidArgument, "count must be at least 1");
    std::string out;
    for (int i = 0; i < count; ++i) {
      substisift::Rng rng(seed, static_cast<std::uint64_t>(i), substisift::StreamSalt::kSimulate);
      const auto sentence = substisift::SimulatePoisoned(template_id, dict, source_label, rng);
      out += json{{"text", substisift::Detokenize(sentence)}, {"source_label", source_label},
                  {"template", template_id}}
                 .dump();
      out += '\n';
    }
    *sentences_jsonl = CopyString(out);
  });
}

// ---- Experiments ------------------------------------------------------------

ss_status ss_experiment_run(const char* config_json, char** report_json, char** table_text) {
  return Guard([&] {
    CheckOut(report_json);
    const auto cfg = substisift::ExperimentConfig::FromJson(NonNull(config_json, "config"));
    const auto report = substisift::RunExperiment(cfg);
    std::string rendered = report.ToJson();
    std::string table = table_text != nullptr ? report.RenderTable() : std::string();
    *report_json = CopyString(rendered);
    if (table_text != nullptr) *table_text = CopyString(table);
  });
}

}  // extern "C"
