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

#ifndef SUBSTISIFT_REMOTE_CLASSIFIER_HPP_
#define SUBSTISIFT_REMOTE_CLASSIFIER_HPP_

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "substisift/classifier.hpp"

namespace substisift {

// Client for a classifier served over HTTP:
//   GET  /v1/meta  -> {"num_classes": n, "reserved_tokens": [...]?}
//   POST /v1/score {"texts": [...]} -> {"scores": [[p_0..p_n-1], ...]}
// Network failures raise kNetwork (retriable); malformed or non-normalized
// responses raise kProtocol.
class RemoteClassifier final : public Scorer {
 public:
  static std::unique_ptr<RemoteClassifier> Connect(const std::string& endpoint);
  ~RemoteClassifier() override;

  int NumClasses() const override { return num_classes_; }
  ScoreVector Score(const Sentence& sentence) const override;
  std::vector<ScoreVector> ScoreBatch(
      std::span<const Sentence> sentences) const override;
  std::vector<Token> ReservedTokens() const override { return reserved_; }

  const std::string& endpoint() const { return endpoint_; }

 private:
  struct Client;
  RemoteClassifier(std::string endpoint, std::unique_ptr<Client> client);

  std::string endpoint_;
  std::unique_ptr<Client> client_;
  mutable std::mutex mu_;
  int num_classes_ = 0;
  std::vector<Token> reserved_;
};

// Validates one /v1/score response body against the expected batch shape.
std::vector<ScoreVector> ParseScoreResponse(const std::string& body,
                                            std::size_t expected_rows,
                                            int num_classes);

}  // namespace substisift

#endif  // SUBSTISIFT_REMOTE_CLASSIFIER_HPP_
