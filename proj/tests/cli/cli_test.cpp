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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<json> ReadJsonLines(const fs::path& p) {
  std::vector<json> out;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

// Runs the CLI from `dir` with stdout and stderr sent to files there.
int RunCli(const fs::path& dir, const std::string& args) {
  const std::string cmd = "cd '" + dir.string() + "' && '" SUBSTISIFT_CLI_PATH "' " + args +
                          " >stdout.txt 2>stderr.txt";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

class CliPipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("substisift_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ASSERT_EQ(RunCli(dir_, "make-corpus --out corpus --size 2000 --seed 1"), 0);
    ASSERT_EQ(RunCli(dir_, "poison --in corpus/train.jsonl --out poisoned.jsonl --rate 0.2 "
                           "--attack badnet --target 1 --seed 1"),
              0);
    ASSERT_EQ(RunCli(dir_, "train --in poisoned.jsonl --out model.json --seed 1"), 0);
    ASSERT_EQ(RunCli(dir_, "build-sets --in corpus/train.jsonl --model model.json --out sets.json "
                           "--k 0.8 --seed 1"),
              0);
    ASSERT_EQ(RunCli(dir_, "build-dict --model model.json --sets sets.json --out dict.json"), 0);
    ASSERT_EQ(RunCli(dir_, "poison --in corpus/test.jsonl --out ptest.jsonl --testset "
                           "--attack badnet --target 1 --seed 1"),
              0);
    ASSERT_EQ(RunCli(dir_, "detect --model model.json --sets sets.json --dict dict.json "
                           "--in ptest.jsonl --out verdicts.jsonl --n-iter 10 --threads 4 --seed 3"),
              0);
  }
  static void TearDownTestSuite() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }

  static inline fs::path dir_;
};

TEST_F(CliPipelineTest, CorpusFilesExist) {
  for (const char* name : {"train.jsonl", "valid.jsonl", "test.jsonl"}) {
    EXPECT_TRUE(fs::exists(dir_ / "corpus" / name)) << name;
  }
}

TEST_F(CliPipelineTest, VerdictsFlagMostPoisonedSentences) {
  const auto verdicts = ReadJsonLines(dir_ / "verdicts.jsonl");
  ASSERT_FALSE(verdicts.empty());
  int flagged = 0;
  for (const auto& v : verdicts) {
    EXPECT_TRUE(v.at("poisoned").get<bool>());
    flagged += v.at("flagged").get<bool>() ? 1 : 0;
  }
  EXPECT_GE(flagged * 10, static_cast<int>(verdicts.size()) * 9);
}

TEST_F(CliPipelineTest, RerunIsByteIdentical) {
  ASSERT_EQ(RunCli(dir_, "detect --model model.json --sets sets.json --dict dict.json "
                         "--in ptest.jsonl --out again.jsonl --n-iter 10 --threads 1 --seed 3"),
            0);
  EXPECT_EQ(ReadFile(dir_ / "verdicts.jsonl"), ReadFile(dir_ / "again.jsonl"));
}

TEST_F(CliPipelineTest, Forensics) {
  ASSERT_EQ(RunCli(dir_, "forensics --in verdicts.jsonl --sets sets.json --out report.json"), 0);
  const json report = json::parse(ReadFile(dir_ / "report.json"));
  EXPECT_EQ(report.at("target_label"), 1);
  EXPECT_TRUE(report.at("trigger_tokens").is_array());
}

TEST_F(CliPipelineTest, Simulate) {
  ASSERT_EQ(RunCli(dir_, "simulate --dict dict.json --template 4 --label 0 --count 3 "
                         "--out sim.jsonl --seed 2"),
            0);
  const auto lines = ReadJsonLines(dir_ / "sim.jsonl");
  ASSERT_EQ(lines.size(), 3u);
  for (const auto& l : lines) {
    EXPECT_EQ(l.at("text").get<std::string>().rfind("maybe ", 0), 0u);
  }
}

TEST_F(CliPipelineTest, Experiment) {
  std::ofstream(dir_ / "config.json")
      << R"({"data": {"synthetic": {"size": 1200}}, "attack": "badnet", "trials": 1,
             "poisoned_samples": 20, "clean_samples": 20, "train": {"epochs": 5}})";
  ASSERT_EQ(RunCli(dir_, "experiment --config config.json --out exp.json --table exp.txt"), 0);
  const json report = json::parse(ReadFile(dir_ / "exp.json"));
  EXPECT_EQ(report.at("trials").size(), 1u);
  EXPECT_NE(ReadFile(dir_ / "exp.txt").find("Recall"), std::string::npos);
}

TEST_F(CliPipelineTest, ValidationFailuresExitOne) {
  EXPECT_EQ(RunCli(dir_, "detect --bogus"), 1);
  EXPECT_EQ(RunCli(dir_, "poison --in corpus/train.jsonl --out x.jsonl --rate 1.5"), 1);
  EXPECT_EQ(RunCli(dir_, "train --in missing.jsonl --out m.json"), 1);
  EXPECT_EQ(RunCli(dir_, ""), 1);
}

TEST_F(CliPipelineTest, MalformedConfigExitsOne) {
  std::ofstream(dir_ / "bad.json") << R"({"attack": "badnet", "surprise": 1})";
  EXPECT_EQ(RunCli(dir_, "experiment --config bad.json --out x.json"), 1);
}

}  // namespace
