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

// substisift: command-line driver over the C API.
//
// Exit status: 0 success, 1 invalid arguments or malformed input, 2 runtime
// failure (I/O, network, protocol, internal).

#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "substisift/substisift.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

// Carries a failed C API call out of a subcommand.
class CallError : public std::runtime_error {
 public:
  CallError(ss_status status, const std::string& message)
      : std::runtime_error(message), status_(status) {}
  ss_status status() const { return status_; }

 private:
  ss_status status_;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void Check(ss_status status) {
  if (status != SS_OK) throw CallError(status, ss_last_error());
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Dataset = std::unique_ptr<ss_dataset, Deleter<ss_dataset, ss_dataset_free>>;
using Model = std::unique_ptr<ss_model, Deleter<ss_model, ss_model_free>>;
using Lexicon = std::unique_ptr<ss_lexicon, Deleter<ss_lexicon, ss_lexicon_free>>;
using TokenSets = std::unique_ptr<ss_token_sets, Deleter<ss_token_sets, ss_token_sets_free>>;
using Dictionary = std::unique_ptr<ss_dictionary, Deleter<ss_dictionary, ss_dictionary_free>>;

// Takes ownership of a string returned by the library.
std::string Adopt(char* s) {
  std::string out = s ? s : "";
  ss_string_free(s);
  return out;
}

Dataset LoadDataset(const std::string& path) {
  ss_dataset* d = nullptr;
  Check(ss_dataset_load(path.c_str(), &d));
  return Dataset(d);
}

Model OpenModel(const std::string& target) {
  ss_model* m = nullptr;
  Check(ss_model_open(target.c_str(), &m));
  return Model(m);
}

Lexicon OpenLexicon(const std::string& path) {
  ss_lexicon* l = nullptr;
  Check(path.empty() ? ss_lexicon_bundled(&l) : ss_lexicon_load(path.c_str(), &l));
  return Lexicon(l);
}

TokenSets LoadSets(const std::string& path) {
  ss_token_sets* s = nullptr;
  Check(ss_token_sets_load(path.c_str(), &s));
  return TokenSets(s);
}

Dictionary LoadDictionary(const std::string& path) {
  ss_dictionary* d = nullptr;
  Check(ss_dictionary_load(path.c_str(), &d));
  return Dictionary(d);
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CallError(SS_ERR_IO, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteAtomic(const std::string& path, const std::string& content) {
  const std::string temp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw CallError(SS_ERR_IO, "cannot write " + path);
    out << content;
    out.flush();
    if (!out) throw CallError(SS_ERR_IO, "cannot write " + path);
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw CallError(SS_ERR_IO, "cannot replace " + path);
  }
}

void RequireInput(const std::string& path) {
  if (path.rfind("http://", 0) == 0 || path.rfind("https://", 0) == 0) return;
  if (!std::filesystem::exists(path)) throw UsageError("no such file: " + path);
}

struct Options {
  std::uint64_t seed = 0;
  std::string config;
  std::string in;
  std::string out;
  std::string model;
  std::string sets;
  std::string dict;
  std::string lexicon;
  double rate = 0.2;
  std::string attack = "badnet";
  int target = 1;
  std::optional<int> n_iter;
  std::optional<double> p_star;
  std::optional<double> zeta;
  bool verbose = false;
  bool testset = false;
  unsigned threads = 1;
  int epochs = 30;
  double learning_rate = 0.1;
  double l2 = 1e-4;
  double k = 0.8;
  std::int64_t sample_size = 0;
  double percentile = 0.95;
  int template_id = 3;
  int label = 0;
  int count = 10;
  std::string table;
  std::int64_t size = 8750;
  double label_noise = 0.02;
  double contrast_rate = 0.0;
};

ss_detector_options DetectorOptions(const Options& o) {
  ss_detector_options d = ss_detector_options_default();
  if (o.n_iter) d.n_iter = *o.n_iter;
  if (o.p_star) d.p_star = *o.p_star;
  if (o.zeta) d.zeta = *o.zeta;
  d.seed = o.seed;
  d.threads = o.threads;
  d.verbose = o.verbose ? 1 : 0;
  return d;
}

void RunPoison(const Options& o) {
  RequireInput(o.in);
  const Dataset input = LoadDataset(o.in);
  ss_dataset* poisoned = nullptr;
  if (o.testset) {
    Check(ss_dataset_poison_testset(input.get(), o.attack.c_str(), o.target, o.seed, &poisoned));
  } else {
    Check(ss_dataset_poison(input.get(), o.attack.c_str(), o.target, o.rate, o.seed, &poisoned));
  }
  const Dataset output(poisoned);
  Check(ss_dataset_save(output.get(), o.out.c_str()));
}

void RunMakeCorpus(const Options& o) {
  ss_dataset* raw = nullptr;
  Check(ss_dataset_synthetic(o.size, o.seed, o.label_noise, o.contrast_rate, &raw));
  const Dataset all(raw);
  ss_dataset* train = nullptr;
  ss_dataset* valid = nullptr;
  ss_dataset* test = nullptr;
  Check(ss_dataset_split(all.get(), 0.8, 0.1, 0.1, o.seed, &train, &valid, &test));
  const Dataset parts[] = {Dataset(train), Dataset(valid), Dataset(test)};
  std::filesystem::create_directories(o.out);
  const char* names[] = {"train.jsonl", "valid.jsonl", "test.jsonl"};
  for (int i = 0; i < 3; ++i) {
    Check(ss_dataset_save(parts[i].get(), (std::filesystem::path(o.out) / names[i]).c_str()));
  }
}

void RunTrain(const Options& o) {
  RequireInput(o.in);
  const Dataset input = LoadDataset(o.in);
  ss_train_options t = ss_train_options_default();
  t.seed = o.seed;
  t.epochs = o.epochs;
  t.learning_rate = o.learning_rate;
  t.l2 = o.l2;
  ss_model* m = nullptr;
  Check(ss_model_train(input.get(), &t, &m));
  const Model model(m);
  Check(ss_model_save(model.get(), o.out.c_str()));
  double accuracy = 0.0;
  Check(ss_model_accuracy(model.get(), input.get(), &accuracy));
  std::cout << nlohmann::json{{"train_accuracy", accuracy}}.dump() << "\n";
}

void RunBuildSets(const Options& o) {
  RequireInput(o.in);
  const Dataset clean = LoadDataset(o.in);
  const Lexicon lexicon = OpenLexicon(o.lexicon);
  Model model;
  if (!o.model.empty()) {
    RequireInput(o.model);
    model = OpenModel(o.model);
  }
  ss_token_sets* s = nullptr;
  Check(ss_token_sets_build(clean.get(), model.get(), lexicon.get(), o.sample_size, o.k, o.seed, &s));
  const TokenSets sets(s);
  Check(ss_token_sets_save(sets.get(), o.out.c_str()));
}

void RunBuildDict(const Options& o) {
  RequireInput(o.model);
  RequireInput(o.sets);
  const Model model = OpenModel(o.model);
  const TokenSets sets = LoadSets(o.sets);
  const Lexicon lexicon = OpenLexicon(o.lexicon);
  ss_dictionary* d = nullptr;
  Check(ss_dictionary_build(model.get(), sets.get(), lexicon.get(), o.percentile, &d));
  const Dictionary dict(d);
  Check(ss_dictionary_save(dict.get(), o.out.c_str()));
}

void RunDetect(const Options& o) {
  for (const auto* path : {&o.model, &o.sets, &o.dict, &o.in}) RequireInput(*path);
  const ss_detector_options detector = DetectorOptions(o);
  const Model model = OpenModel(o.model);
  const TokenSets sets = LoadSets(o.sets);
  const Dictionary dict = LoadDictionary(o.dict);
  const Lexicon lexicon = OpenLexicon(o.lexicon);
  const Dataset input = LoadDataset(o.in);
  char* verdicts = nullptr;
  Check(ss_detect_dataset(model.get(), dict.get(), sets.get(), lexicon.get(), input.get(), &detector,
                          &verdicts));
  const std::string lines = Adopt(verdicts);
  WriteAtomic(o.out, lines);
  char* summary = nullptr;
  Check(ss_detection_summary(lines.c_str(), &summary));
  std::cout << Adopt(summary) << "\n";
}

void RunForensics(const Options& o) {
  RequireInput(o.in);
  RequireInput(o.sets);
  const TokenSets sets = LoadSets(o.sets);
  const std::string verdicts = ReadText(o.in);
  char* report = nullptr;
  Check(ss_forensics_from_verdicts(verdicts.c_str(), sets.get(), &report));
  const std::string text = Adopt(report);
  if (o.out.empty()) {
    std::cout << text << "\n";
  } else {
    WriteAtomic(o.out, text + "\n");
  }
}

void RunExperiment(const Options& o, const CLI::App& sub) {
  RequireInput(o.config);
  nlohmann::json config;
  try {
    config = nlohmann::json::parse(ReadText(o.config));
  } catch (const nlohmann::json::exception& e) {
    throw CallError(SS_ERR_PARSE, o.config + ": " + e.what());
  }
  if (!config.is_object()) throw UsageError(o.config + ": expected a JSON object");
  if (sub.count("--seed") > 0) config["seed"] = o.seed;
  if (sub.count("--attack") > 0) config["attack"] = o.attack;
  if (sub.count("--target") > 0) config["target"] = o.target;
  if (sub.count("--rate") > 0) config["poison_rate"] = o.rate;
  if (sub.count("--threads") > 0) config["threads"] = o.threads;
  if (o.n_iter) config["detector"]["n_iter"] = *o.n_iter;
  if (o.p_star) config["detector"]["p_star"] = *o.p_star;
  if (o.zeta) config["detector"]["zeta"] = *o.zeta;
  char* report = nullptr;
  char* table = nullptr;
  Check(ss_experiment_run(config.dump().c_str(), &report, &table));
  const std::string report_text = Adopt(report);
  const std::string table_text = Adopt(table);
  WriteAtomic(o.out, report_text + "\n");
  if (!o.table.empty()) WriteAtomic(o.table, table_text);
  std::cout << table_text;
}

void RunSimulate(const Options& o) {
  RequireInput(o.dict);
  const Dictionary dict = LoadDictionary(o.dict);
  char* lines = nullptr;
  Check(ss_simulate(dict.get(), o.template_id, o.label, o.count, o.seed, &lines));
  const std::string text = Adopt(lines);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    WriteAtomic(o.out, text);
  }
}

int ExitCodeFor(ss_status status) {
  switch (status) {
    case SS_OK:
      return kExitOk;
    case SS_ERR_INVALID_ARGUMENT:
    case SS_ERR_PARSE:
      return kExitValidation;
    default:
      return kExitRuntime;
  }
}

void ConfigureLogging(bool verbose) {
  const char* env = std::getenv("SUBSTISIFT_LOG");
  const std::string level = env != nullptr ? env : (verbose ? "info" : "error");
  if (ss_set_log_level(level.c_str()) != SS_OK) {
    std::cerr << "warning: ignoring SUBSTISIFT_LOG=" << level << " (" << ss_last_error() << ")\n";
    ss_set_log_level("error");
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Backdoor-poisoned sentence detection workbench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ss_version());

  const auto add_seed = [&](CLI::App* s) { s->add_option("--seed", o.seed, "Seed for every random choice"); };
  const auto add_verbose = [&](CLI::App* s) { s->add_flag("--verbose", o.verbose, "More logging and detail"); };
  const auto add_lexicon = [&](CLI::App* s) {
    s->add_option("--lexicon", o.lexicon, "Tag lexicon TSV (default: bundled)");
  };
  const auto add_detector = [&](CLI::App* s) {
    s->add_option("--n-iter", o.n_iter, "Substitution trials per sentence")->check(CLI::PositiveNumber);
    s->add_option("--p-star", o.p_star, "Confidence bar for a successful trial")->check(CLI::Range(0.0, 1.0));
    s->add_option("--zeta", o.zeta, "Flag when the success ratio exceeds this")->check(CLI::Range(0.0, 1.0));
    s->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  };
  const auto add_attack = [&](CLI::App* s) {
    s->add_option("--attack", o.attack, "badnet | insertsent | template:N");
    s->add_option("--target", o.target, "Target label")->check(CLI::NonNegativeNumber);
  };

  auto* make_corpus = app.add_subcommand("make-corpus", "Write the synthetic corpus as train/valid/test");
  make_corpus->add_option("--out", o.out, "Output directory")->required();
  make_corpus->add_option("--size", o.size, "Number of sentences")->check(CLI::PositiveNumber);
  make_corpus->add_option("--label-noise", o.label_noise)->check(CLI::Range(0.0, 0.5));
  make_corpus->add_option("--contrast-rate", o.contrast_rate)->check(CLI::Range(0.0, 1.0));
  add_seed(make_corpus);
  add_verbose(make_corpus);

  auto* poison = app.add_subcommand("poison", "Poison a dataset");
  poison->add_option("--in", o.in, "Input dataset")->required();
  poison->add_option("--out", o.out, "Output dataset (JSONL)")->required();
  poison->add_option("--rate", o.rate, "Fraction of examples to poison")->check(CLI::Range(0.0, 1.0));
  poison->add_flag("--testset", o.testset, "Poison every non-target example and drop the rest");
  add_attack(poison);
  add_seed(poison);
  add_verbose(poison);

  auto* train = app.add_subcommand("train", "Train the victim classifier");
  train->add_option("--in", o.in, "Training dataset")->required();
  train->add_option("--out", o.out, "Model file")->required();
  train->add_option("--epochs", o.epochs)->check(CLI::PositiveNumber);
  train->add_option("--lr", o.learning_rate)->check(CLI::PositiveNumber);
  train->add_option("--l2", o.l2)->check(CLI::NonNegativeNumber);
  add_seed(train);
  add_verbose(train);

  auto* build_sets = app.add_subcommand("build-sets", "Build special and frequency token sets");
  build_sets->add_option("--in", o.in, "Clean corpus")->required();
  build_sets->add_option("--out", o.out, "Token-set file")->required();
  build_sets->add_option("--model", o.model, "Model file or http:// endpoint (vocabulary, reserved tokens)");
  build_sets->add_option("--k", o.k, "Frequency percentile")->check(CLI::Range(0.0, 1.0));
  build_sets->add_option("--sample-size", o.sample_size, "Sentences to sample (0: all)")
      ->check(CLI::NonNegativeNumber);
  add_lexicon(build_sets);
  add_seed(build_sets);
  add_verbose(build_sets);

  auto* build_dict = app.add_subcommand("build-dict", "Build the substitution dictionary");
  build_dict->add_option("--model", o.model, "Model file or http:// endpoint")->required();
  build_dict->add_option("--sets", o.sets, "Token-set file")->required();
  build_dict->add_option("--out", o.out, "Dictionary file")->required();
  build_dict->add_option("--percentile", o.percentile)->check(CLI::Range(0.0, 1.0));
  add_lexicon(build_dict);
  add_seed(build_dict);
  add_verbose(build_dict);

  auto* detect = app.add_subcommand("detect", "Flag poisoned sentences");
  detect->add_option("--model", o.model, "Model file or http:// endpoint")->required();
  detect->add_option("--sets", o.sets, "Token-set file")->required();
  detect->add_option("--dict", o.dict, "Dictionary file")->required();
  detect->add_option("--in", o.in, "Sentences to check")->required();
  detect->add_option("--out", o.out, "Verdicts (JSONL)")->required();
  add_detector(detect);
  add_lexicon(detect);
  add_seed(detect);
  add_verbose(detect);

  auto* forensics = app.add_subcommand("forensics", "Investigate flagged sentences");
  forensics->add_option("--in", o.in, "Verdicts (JSONL)")->required();
  forensics->add_option("--sets", o.sets, "Token-set file")->required();
  forensics->add_option("--out", o.out, "Report file (default: stdout)");
  add_seed(forensics);
  add_verbose(forensics);

  auto* experiment = app.add_subcommand("experiment", "Run a seeded multi-trial experiment");
  experiment->add_option("--config", o.config, "Experiment config (JSON)")->required();
  experiment->add_option("--out", o.out, "Report file (JSON)")->required();
  experiment->add_option("--table", o.table, "Also write the text table here");
  experiment->add_option("--rate", o.rate, "Override poison_rate")->check(CLI::Range(0.0, 1.0));
  add_attack(experiment);
  add_detector(experiment);
  add_seed(experiment);
  add_verbose(experiment);

  auto* simulate = app.add_subcommand("simulate", "Write sentences in a template's trigger syntax");
  simulate->add_option("--dict", o.dict, "Dictionary file")->required();
  simulate->add_option("--template", o.template_id, "Template id (1-5)")->check(CLI::Range(1, 5));
  simulate->add_option("--label", o.label, "Label whose substitutes fill the sentence")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--count", o.count)->check(CLI::PositiveNumber);
  simulate->add_option("--out", o.out, "Output (JSONL, default: stdout)");
  add_seed(simulate);
  add_verbose(simulate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }
  ConfigureLogging(o.verbose);

  try {
    if (make_corpus->parsed()) RunMakeCorpus(o);
    if (poison->parsed()) RunPoison(o);
    if (train->parsed()) RunTrain(o);
    if (build_sets->parsed()) RunBuildSets(o);
    if (build_dict->parsed()) RunBuildDict(o);
    if (detect->parsed()) RunDetect(o);
    if (forensics->parsed()) RunForensics(o);
    if (experiment->parsed()) RunExperiment(o, *experiment);
    if (simulate->parsed()) RunSimulate(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const CallError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e.status());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
