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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "substisift/attack.hpp"
#include "substisift/detector.hpp"
#include "substisift/eval.hpp"
#include "substisift/percentile.hpp"
#include "substisift/rng.hpp"
#include "substisift/synthetic_corpus.hpp"
#include "substisift/text.hpp"
#include "substisift/token_sets.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

namespace substisift {
namespace {

constexpr std::uint64_t kMasterSeed = 1;
constexpr double kPercentileBudgetSeconds = 5.0;
constexpr double kExperimentBudgetSeconds = 300.0;

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *v);
  return buf;
}

struct Outcome {
  bool passed = true;
  std::string detail;
};

int g_failures = 0;

void Report(int id, const std::string& title, const Outcome& o) {
  std::printf("%s  %d  %s  (%s)\n", o.passed ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.passed) ++g_failures;
}

template <typename Fn>
void Run(int id, const std::string& title, Fn fn) {
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  Report(id, title, o);
}

Outcome PercentileOracle() {
  const auto start = Clock::now();
  constexpr double kFractions[] = {0.05, 0.15, 0.5, 0.8, 0.9, 0.95, 0.99};
  for (int i = 0; i < 1000; ++i) {
    Rng rng(kMasterSeed, static_cast<std::uint64_t>(i), StreamSalt::kSample);
    const double k = i % 2 == 0 ? kFractions[rng.UniformIndex(std::size(kFractions))]
                                : 0.01 + 0.98 * rng.UniformDouble();
    const FrequencyTable table = testutil::RandomFrequencyTable(rng, 1, 500);
    const FrequencySets got = BuildFrequencySets(table, k);
    const auto want = testutil::OracleFrequencySets(table, k);
    if (got.threshold != want.threshold || got.high != want.high) {
      return {false, "F_k mismatch on table " + std::to_string(i)};
    }
    const std::vector<double> scores = testutil::RandomScores(rng, 1, 500);
    if (NearestRankPercentile(scores, k) != testutil::OraclePercentile(scores, k)) {
      return {false, "score percentile mismatch on case " + std::to_string(i)};
    }
  }
  const double elapsed = SecondsSince(start);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "1000 tables, %.2fs", elapsed);
  return {elapsed < kPercentileBudgetSeconds, buf};
}

Outcome DictionaryOracle() {
  const auto& toy = testutil::Toy();
  const auto& desk = testutil::Desk();
  auto v = testutil::VerifyDictionary(toy.model, toy.pool, toy.lexicon, toy.dictionary);
  const auto desk_v = testutil::VerifyDictionary(desk.model, desk.pool, desk.lexicon, desk.dictionary);
  v.insert(v.end(), desk_v.begin(), desk_v.end());
  std::string detail = std::to_string(v.size()) + " violations";
  if (!v.empty()) detail += "; first: " + v.front();
  return {v.empty(), detail};
}

Outcome DetectorOracle() {
  const auto& desk = testutil::Desk();
  std::vector<Sentence> sentences;
  for (std::size_t i = 0; i < 100 && i < desk.poisoned_test.size(); ++i) {
    sentences.push_back(desk.poisoned_test.examples[i].sentence);
  }
  for (std::size_t i = 0; i < 50 && i < desk.test.size(); ++i) {
    sentences.push_back(desk.test.examples[i].sentence);
  }
  std::vector<Token> vocab = desk.model.vocabulary();
  for (const Token& t : DefaultBadNetTriggers()) vocab.push_back(t);
  for (const char* t : {"zzzqx", "42", "naïve", "you're", "if", "really", "?"}) vocab.emplace_back(t);
  Rng rng(kMasterSeed, 0, StreamSalt::kSample);
  while (sentences.size() < 200) sentences.push_back(testutil::RandomSentence(rng, vocab, 1, 25));

  DetectorConfig cfg;
  cfg.seed = kMasterSeed;
  const DetectionContext context = desk.Context();
  const auto verdicts = DetectBatch(sentences, context, cfg, 4);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const auto ref = testutil::ReferenceDetect(sentences[i], desk.model, desk.dictionary, desk.sets,
                                               desk.lexicon, cfg, i);
    if (ref.success_count != verdicts[i].success_count || ref.flagged != verdicts[i].flagged) {
      return {false, "N* mismatch on \"" + Detokenize(sentences[i]) + "\""};
    }
  }
  return {true, std::to_string(sentences.size()) + " sentences agree"};
}

ExperimentConfig DeskConfig(const std::string& attack) {
  ExperimentConfig cfg;
  cfg.data.synthetic = SyntheticCorpusConfig{};
  cfg.attack = ParseAttack(attack, 1);
  cfg.seed = kMasterSeed;
  cfg.trials = 10;
  cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  return cfg;
}

struct TimedReport {
  ExperimentReport report;
  double seconds = 0.0;
};

TimedReport RunTimed(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  ExperimentReport report = RunExperiment(cfg);
  return {std::move(report), SecondsSince(start)};
}

bool AtLeast(const std::optional<double>& v, double bar) { return v && *v >= bar; }

Outcome BadNetDesk(const TimedReport& run) {
  const auto& r = run.report;
  const auto asr = r.Metric("asr").mean;
  const auto cacc = r.Metric("cacc").mean;
  const auto base = r.Metric("clean_baseline_cacc").mean;
  const auto recall = r.Metric("recall").mean;
  const auto f1 = r.Metric("f1").mean;
  const bool cacc_ok = cacc && base && std::fabs(*cacc - *base) <= 0.05;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1fs", run.seconds);
  const std::string detail = "asr " + Fmt(asr) + ", cacc " + Fmt(cacc) + " vs " + Fmt(base) +
                             ", recall " + Fmt(recall) + ", f1 " + Fmt(f1) + ", " + buf;
  return {AtLeast(asr, 0.95) && cacc_ok && AtLeast(recall, 0.95) && AtLeast(f1, 0.85) &&
              run.seconds < kExperimentBudgetSeconds,
          detail};
}

Outcome TemplateDesk() {
  const auto r = RunExperiment(DeskConfig("template:3"));
  int target_ok = 0;
  int template_ok = 0;
  for (const auto& t : r.trials) {
    target_ok += t.target_label_correct ? 1 : 0;
    template_ok += t.template_correct ? 1 : 0;
  }
  const auto asr = r.Metric("asr").mean;
  const auto f1 = r.Metric("f1").mean;
  const std::string detail = "asr " + Fmt(asr) + ", f1 " + Fmt(f1) + ", target " +
                             std::to_string(target_ok) + "/10, template " +
                             std::to_string(template_ok) + "/10";
  return {AtLeast(asr, 0.90) && AtLeast(f1, 0.80) && target_ok == 10 && template_ok >= 9, detail};
}

Outcome InsertSentDesk() {
  const auto r = RunExperiment(DeskConfig("insertsent"));
  std::map<Token, std::int64_t> totals;
  for (const auto& t : r.trials) {
    if (!t.forensics) continue;
    for (const auto& [token, count] : t.forensics->trigger_tokens) totals[token] += count;
  }
  std::vector<std::pair<Token, std::int64_t>> ranked(totals.begin(), totals.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const Sentence trigger = Tokenize(kDefaultInsertSentTrigger);
  const std::set<Token> trigger_tokens(trigger.begin(), trigger.end());
  int hits = 0;
  std::string top;
  for (std::size_t i = 0; i < ranked.size() && i < 7; ++i) {
    hits += trigger_tokens.contains(ranked[i].first) ? 1 : 0;
    top += (i ? " " : "") + ranked[i].first;
  }
  const auto recall = r.Metric("recall").mean;
  return {AtLeast(recall, 0.95) && hits >= 5,
          "recall " + Fmt(recall) + ", top-7 [" + top + "] has " + std::to_string(hits) + " trigger tokens"};
}

Outcome IterationStability(const ExperimentReport& ten) {
  std::vector<double> f1s;
  std::string detail;
  for (const int n : {5, 10, 20}) {
    std::optional<double> f1;
    if (n == 10) {
      f1 = ten.Metric("f1").mean;
    } else {
      ExperimentConfig cfg = DeskConfig("badnet");
      cfg.detector.n_iter = n;
      f1 = RunExperiment(cfg).Metric("f1").mean;
    }
    if (!f1) return {false, "f1 undefined at n_iter " + std::to_string(n)};
    f1s.push_back(*f1);
    detail += (detail.empty() ? "" : ", ") + std::string("n_iter ") + std::to_string(n) + " f1 " + Fmt(f1);
  }
  const auto [lo, hi] = std::minmax_element(f1s.begin(), f1s.end());
  return {*hi - *lo <= 0.05, detail};
}

Outcome Properties() {
  int failed = 0;
  std::string detail;
  for (const auto& r : testutil::RunAllProperties(kMasterSeed)) {
    if (!r.passed) {
      ++failed;
      detail += r.name + ": " + r.counterexample + "; ";
    }
  }
  return {failed == 0, failed == 0 ? "all properties hold" : detail};
}

}  // namespace
}  // namespace substisift

int main() {
  using namespace substisift;
  Run(1, "percentile oracle (F_k, nu)", PercentileOracle);
  Run(2, "dictionary matches recomputation", DictionaryOracle);
  Run(3, "detector matches reference N*", DetectorOracle);

  std::optional<TimedReport> badnet;
  Run(4, "BadNet desk experiment", [&] {
    badnet = RunTimed(DeskConfig("badnet"));
    return BadNetDesk(*badnet);
  });
  Run(5, "template 3 desk experiment", TemplateDesk);
  Run(6, "InsertSent desk experiment", InsertSentDesk);
  Run(7, "n_iter stability", [&] {
    if (!badnet) return Outcome{false, "BadNet run unavailable"};
    return IterationStability(badnet->report);
  });
  Run(8, "property suite", Properties);
  return g_failures == 0 ? 0 : 1;
}
