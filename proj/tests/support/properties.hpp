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

#ifndef SUBSTISIFT_TESTS_SUPPORT_PROPERTIES_HPP_
#define SUBSTISIFT_TESTS_SUPPORT_PROPERTIES_HPP_

#include <cstdint>
#include <string>
#include <vector>

// Property suites shared by the unit tests and the acceptance runner. Each
// check draws its cases from a hand-rolled generator seeded by `seed` and
// stops at the first counterexample.
namespace substisift::testutil {

struct PropertyResult {
  std::string name;
  bool passed = true;
  int cases = 0;
  std::string counterexample;
};

PropertyResult CheckTokenizerRoundTrip(std::uint64_t seed, int cases);
PropertyResult CheckTagLengthPreservation(std::uint64_t seed, int cases);
PropertyResult CheckSoftmaxNormalization(std::uint64_t seed, int cases);
PropertyResult CheckSubstitutionKeepsProtected(std::uint64_t seed, int cases);
PropertyResult CheckFlagRule(std::uint64_t seed, int cases);
PropertyResult CheckConfusionIdentities(std::uint64_t seed, int cases);
// Byte-identical reruns of split, sampling, poisoning, training, set and
// dictionary building, detection, simulation and the experiment runner.
PropertyResult CheckSeededDeterminism(std::uint64_t seed);

std::vector<PropertyResult> RunAllProperties(std::uint64_t seed);

}  // namespace substisift::testutil

#endif  // SUBSTISIFT_TESTS_SUPPORT_PROPERTIES_HPP_
