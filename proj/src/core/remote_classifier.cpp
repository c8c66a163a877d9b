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

#include "substisift/remote_classifier.hpp"

#include <cmath>

#include "httplib.h"
#include "json.hpp"
#include "substisift/error.hpp"

namespace substisift {
namespace {

using nlohmann::json;

std::string Excerpt(const std::string& body) {
  constexpr std::size_t kMax = 120;
  return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

}  // namespace

struct RemoteClassifier::Client {
  Client(const std::string& origin, std::string prefix)
      : http(origin), path_prefix(std::move(prefix)) {
    http.set_connection_timeout(5, 0);
    http.set_read_timeout(60, 0);
  }
  httplib::Client http;
  std::string path_prefix;
};

RemoteClassifier::RemoteClassifier(std::string endpoint, std::unique_ptr<Client> client)
    : endpoint_(std::move(endpoint)), client_(std::move(client)) {}

RemoteClassifier::~RemoteClassifier() = default;

std::unique_ptr<RemoteClassifier> RemoteClassifier::Connect(const std::string& endpoint) {
  const std::size_t scheme = endpoint.find("://");
  if (scheme == std::string::npos || endpoint.substr(0, scheme) != "http") {
    Fail(ErrorCode::kInvalidArgument, "remote endpoint must be an http:// URL: " + endpoint);
  }
  std::size_t path_start = endpoint.find('/', scheme + 3);
  std::string origin = endpoint.substr(0, path_start);
  std::string prefix =
      path_start == std::string::npos ? std::string() : endpoint.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  auto remote = std::unique_ptr<RemoteClassifier>(
      new RemoteClassifier(endpoint, std::make_unique<Client>(origin, prefix)));

  auto res = remote->client_->http.Get(prefix + "/v1/meta");
  if (!res) {
    Fail(ErrorCode::kNetwork, "GET " + endpoint + "/v1/meta failed: " +
                                  httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    Fail(ErrorCode::kProtocol, "GET /v1/meta returned HTTP " + std::to_string(res->status) +
                                   ": " + Excerpt(res->body));
  }
  try {
    const json meta = json::parse(res->body);
    const json& n = meta.at("num_classes");
    if (!n.is_number_integer() || n.get<int>() < 2) {
      Fail(ErrorCode::kProtocol, "num_classes must be an integer >= 2: " + Excerpt(res->body));
    }
    remote->num_classes_ = n.get<int>();
    if (meta.contains("reserved_tokens")) {
      remote->reserved_ = meta.at("reserved_tokens").get<std::vector<Token>>();
    }
  } catch (const json::exception& e) {
    Fail(ErrorCode::kProtocol, std::string("malformed /v1/meta response (") + e.what() +
                                   "): " + Excerpt(res->body));
  }
  return remote;
}

std::vector<ScoreVector> ParseScoreResponse(const std::string& body,
                                            std::size_t expected_rows, int num_classes) {
  std::vector<ScoreVector> scores;
  try {
    const json doc = json::parse(body);
    const json& rows = doc.at("scores");
    if (!rows.is_array() || rows.size() != expected_rows) {
      Fail(ErrorCode::kProtocol, "expected " + std::to_string(expected_rows) +
                                     " score rows: " + Excerpt(body));
    }
    for (const json& row : rows) {
      if (!row.is_array() || row.size() != static_cast<std::size_t>(num_classes)) {
        Fail(ErrorCode::kProtocol, "score row has wrong arity: " + Excerpt(body));
      }
      ScoreVector probs;
      double sum = 0.0;
      for (const json& p : row) {
        if (!p.is_number()) Fail(ErrorCode::kProtocol, "non-numeric score: " + Excerpt(body));
        const double v = p.get<double>();
        if (!(v >= 0.0 && v <= 1.0)) {
          Fail(ErrorCode::kProtocol, "score outside [0, 1]: " + Excerpt(body));
        }
        probs.push_back(v);
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-6) {
        Fail(ErrorCode::kProtocol, "score row does not sum to 1: " + Excerpt(body));
      }
      scores.push_back(std::move(probs));
    }
  } catch (const json::exception& e) {
    Fail(ErrorCode::kProtocol, std::string("malformed /v1/score response (") + e.what() +
                                   "): " + Excerpt(body));
  }
  return scores;
}

std::vector<ScoreVector> RemoteClassifier::ScoreBatch(
    std::span<const Sentence> sentences) const {
  if (sentences.empty()) return {};
  json request;
  request["texts"] = json::array();
  for (const auto& s : sentences) request["texts"].push_back(Detokenize(s));
  const std::string payload = request.dump();

  std::lock_guard<std::mutex> lock(mu_);
  auto res = client_->http.Post(client_->path_prefix + "/v1/score", payload, "application/json");
  if (!res) {
    Fail(ErrorCode::kNetwork, "POST " + endpoint_ + "/v1/score failed: " +
                                  httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    Fail(ErrorCode::kProtocol, "POST /v1/score returned HTTP " + std::to_string(res->status) +
                                   ": " + Excerpt(res->body));
  }
  return ParseScoreResponse(res->body, sentences.size(), num_classes_);
}

ScoreVector RemoteClassifier::Score(const Sentence& sentence) const {
  return ScoreBatch(std::span<const Sentence>(&sentence, 1)).front();
}

}  // namespace substisift
