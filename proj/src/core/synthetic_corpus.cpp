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

#include "substisift/synthetic_corpus.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "substisift/error.hpp"
#include "substisift/rng.hpp"

namespace substisift {
namespace {

using Words = std::vector<std::string>;

const Words kPositiveAdjectives = {
    "wonderful", "brilliant",  "superb",     "delightful", "charming",   "brave",
    "gorgeous",  "engaging",   "heartfelt",  "clever",     "witty",      "touching",
    "stunning",  "excellent",  "enjoyable",  "fantastic",  "memorable",  "inspired",
    "fresh",     "funny",      "lovely",     "powerful",   "remarkable", "smart",
    "terrific",  "thoughtful", "vivid",      "compelling", "masterful",  "sincere",
    "elegant",   "graceful",   "tender",     "joyous",     "dazzling",   "hilarious",
    "satisfying", "luminous",  "gripping",   "riveting",   "uplifting",  "warm"};

const Words kNegativeAdjectives = {
    "awful",     "terrible",   "boring",        "dull",       "tedious",     "clumsy",
    "bland",     "lifeless",   "painful",       "pointless",  "dreadful",    "mediocre",
    "shallow",   "sloppy",     "stale",         "tiresome",   "weak",        "messy",
    "lame",      "flat",       "forgettable",   "incoherent", "predictable", "pretentious",
    "silly",     "ugly",       "annoying",      "horrible",   "unfunny",     "wooden",
    "hollow",    "dismal",     "cheap",         "labored",    "lazy",        "bloated",
    "confused",  "irritating", "disappointing", "dreary",     "grating",     "limp"};

// Manner and time adverbs with no polarity; they still land in the RB cell.
const Words kAdverbs = {"finally", "recently", "originally", "mostly", "largely",
                        "partly",  "clearly",  "entirely",   "nearly", "simply"};

// Roughly by how often reviews mention them.
const Words kNouns = {
    "film",     "movie",    "story",      "plot",       "cast",       "script",
    "acting",   "director", "ending",     "performance", "character", "dialogue",
    "scene",    "soundtrack", "camera",   "audience",   "comedy",     "drama",
    "thriller", "romance",  "hero",       "villain",    "screenplay", "pace",
    "tone",     "mood",     "twist",      "climax",     "finale",     "premise",
    "setting",  "narrative", "editing",   "direction",  "cinematography", "costume",
    "humor",    "suspense", "tension",    "chemistry",  "trailer",    "sequel",
    "actor",    "actress",  "documentary", "producer",  "theater",    "music"};

// Nouns used as modifiers ("the horror film"). Carry no sentiment.
const Words kModifiers = {"family",  "war",     "crime",  "horror", "summer", "holiday",
                          "indie",   "studio",  "road",   "spy",    "space",  "disaster",
                          "monster", "teen",    "heist",  "prison", "sports", "fantasy"};

const Words kVerbs3sg = {"feels",   "looks",    "seems",   "plays",    "moves",
                         "unfolds", "explores", "follows", "captures", "lasts"};

const Words kParticiples = {"made", "written", "told", "shown", "played", "built", "given"};

const Words kIntensifiers = {"very", "so", "quite", "rather", "just", "pretty"};

// Pseudo-words standing in for proper names: a long, mostly rare tail.
Words MakeNames(std::size_t count) {
  static const Words kOnsets = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r",
                                "t", "v", "z", "br", "dr", "kl", "tr", "st", "gr", "pl"};
  static const Words kVowels = {"a", "e", "i", "o", "u", "ai", "ou"};
  static const Words kCodas = {"n", "r", "l", "k", "m", "t"};
  Rng rng(0x5eed, 0, StreamSalt::kCorpus);
  std::set<std::string> seen;
  Words names;
  while (names.size() < count) {
    std::string w;
    const std::size_t syllables = 2 + rng.UniformIndex(2);
    for (std::size_t i = 0; i < syllables; ++i) w += rng.Pick(kOnsets) + rng.Pick(kVowels);
    w += rng.Pick(kCodas);
    if (seen.insert(w).second) names.push_back(w);
  }
  return names;
}

// "a film" / "an epic".
std::string Indefinite(const std::string& phrase) {
  const bool vowel = std::string_view("aeiou").find(phrase.front()) != std::string_view::npos;
  return (vowel ? "an " : "a ") + phrase;
}

class ZipfSampler {
 public:
  ZipfSampler(const Words& words, double exponent) : words_(words) {
    double total = 0.0;
    for (std::size_t r = 0; r < words.size(); ++r) {
      total += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
      cumulative_.push_back(total);
    }
    for (double& c : cumulative_) c /= total;
  }

  const std::string& Draw(Rng& rng) const {
    const double u = rng.UniformDouble();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return words_[static_cast<std::size_t>(it - cumulative_.begin())];
  }

 private:
  const Words& words_;
  std::vector<double> cumulative_;
};

class SentenceBuilder {
 public:
  SentenceBuilder(Rng& rng, const ZipfSampler& nouns, const ZipfSampler& names)
      : rng_(rng), nouns_(nouns), names_(names) {}

  std::string Adjective(int polarity) {
    return rng_.Pick(polarity == 1 ? kPositiveAdjectives : kNegativeAdjectives);
  }
  std::string Adverb() { return rng_.Pick(kAdverbs); }
  std::string Noun() { return nouns_.Draw(rng_); }
  std::string Name() { return names_.Draw(rng_); }
  std::string Modifier() { return rng_.Pick(kModifiers); }

  // Optional intensifier followed by a polar adjective.
  std::string Graded(int polarity) {
    if (rng_.Bernoulli(0.3)) return rng_.Pick(kIntensifiers) + " " + Adjective(polarity);
    return Adjective(polarity);
  }

  // "the horror cast" / "the cast of kelbor".
  std::string NounPhrase() {
    std::string np = "the ";
    if (rng_.Bernoulli(0.3)) np += Modifier() + " ";
    np += Noun();
    if (rng_.Bernoulli(0.3)) np += " of " + Name();
    return np;
  }

  std::string Clause(int p) {
    switch (rng_.UniformIndex(8)) {
      case 0:
        return NounPhrase() + " is " + Graded(p);
      case 1:
        return NounPhrase() + " " + rng_.Pick(kVerbs3sg) + " " + Graded(p);
      case 2:
        return Indefinite(Adjective(p)) + " " + Noun() + " with " + Indefinite(Modifier()) + " " +
               Noun();
      case 3:
        return NounPhrase() + " was " + Adverb() + " " + rng_.Pick(kParticiples) + " and " +
               Adjective(p);
      case 4:
        return "it is " + Indefinite(Graded(p)) + " " + Noun() + " about " + Indefinite(Modifier()) +
               " " + Noun();
      case 5:
        return "i found " + NounPhrase() + " " + Graded(p);
      case 6:
        return Name() + " gives " + Indefinite(Adjective(p)) + " performance in " +
               Indefinite(Modifier()) + " " +
               Noun();
      default:
        return NounPhrase() + " feels " + Graded(p) + " from start to finish";
    }
  }

  std::string Review(int label, bool contrast) {
    if (contrast) return Clause(1 - label) + " but " + Clause(label) + " .";
    return Clause(label) + " .";
  }

 private:
  Rng& rng_;
  const ZipfSampler& nouns_;
  const ZipfSampler& names_;
};

}  // namespace

Dataset GenerateSentimentCorpus(const SyntheticCorpusConfig& cfg) {
  if (cfg.size < 3) Fail(ErrorCode::kInvalidArgument, "synthetic corpus needs at least 3 examples");
  if (cfg.label_noise < 0.0 || cfg.label_noise >= 0.5 || cfg.contrast_rate < 0.0 ||
      cfg.contrast_rate > 1.0) {
    Fail(ErrorCode::kInvalidArgument, "invalid synthetic corpus rates");
  }
  static const Words kNames = MakeNames(6000);
  const ZipfSampler nouns(kNouns, 1.0);
  const ZipfSampler names(kNames, 1.05);

  Dataset dataset;
  dataset.num_classes = 2;
  dataset.split = SplitTag::kTrain;
  dataset.examples.reserve(static_cast<std::size_t>(cfg.size));
  for (std::int64_t i = 0; i < cfg.size; ++i) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(i), StreamSalt::kCorpus);
    SentenceBuilder builder(rng, nouns, names);
    const int label = static_cast<int>(rng.UniformIndex(2));
    const bool contrast = rng.Bernoulli(cfg.contrast_rate);
    LabeledExample example;
    example.sentence = Tokenize(builder.Review(label, contrast));
    example.label = rng.Bernoulli(cfg.label_noise) ? 1 - label : label;
    dataset.examples.push_back(std::move(example));
  }
  return dataset;
}

}  // namespace substisift
