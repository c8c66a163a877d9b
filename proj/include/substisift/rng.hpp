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

#ifndef SUBSTISIFT_RNG_HPP_
#define SUBSTISIFT_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace substisift {

// Stream salts. Every seeded stage derives its own stream from
// (seed, index, salt) so stages never share draws.
enum class StreamSalt : std::uint64_t {
  kSplit = 0x11,
  kSample = 0x12,
  kPoisonChoice = 0x21,
  kPoisonExample = 0x22,
  kPoisonTest = 0x23,
  kTrain = 0x31,
  kDetect = 0x41,
  kSimulate = 0x51,
  kTrial = 0x61,
  kTestSample = 0x62,
  kCorpus = 0x71,
};

// splitmix64 finalizer over the three inputs.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index,
                         StreamSalt salt);

// Thin wrapper over mt19937_64. Bounded draws are done here rather than with
// std::uniform_int_distribution so streams are identical across standard
// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t index, StreamSalt salt)
      : engine_(DeriveSeed(seed, index, salt)) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform in [0, n). n must be positive.
  std::size_t UniformIndex(std::size_t n);

  // Uniform in [0, 1) with 53 bits of resolution.
  double UniformDouble();

  bool Bernoulli(double p) { return UniformDouble() < p; }

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[UniformIndex(i)]);
    }
  }

  template <typename T>
  const T& Pick(const std::vector<T>& items) {
    return items[UniformIndex(items.size())];
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace substisift

#endif  // SUBSTISIFT_RNG_HPP_
