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

#ifndef SUBSTISIFT_PERCENTILE_HPP_
#define SUBSTISIFT_PERCENTILE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "substisift/error.hpp"

namespace substisift {

// 1-based nearest rank: ceil(fraction * n), clamped to [1, n]. The small
// epsilon keeps products such as 0.95 * 100 from rounding up a rank.
inline std::size_t NearestRank(std::size_t n, double fraction) {
  const double raw = std::ceil(fraction * static_cast<double>(n) - 1e-9);
  if (raw < 1.0) return 1;
  if (raw > static_cast<double>(n)) return n;
  return static_cast<std::size_t>(raw);
}

// Nearest-rank percentile: the value at 1-based position NearestRank(n, f) of
// the ascending order of `values`.
template <typename T>
T NearestRankPercentile(std::vector<T> values, double fraction) {
  if (values.empty()) {
    Fail(ErrorCode::kInvalidArgument, "percentile of an empty set");
  }
  if (!(fraction > 0.0 && fraction < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "percentile fraction must be in (0, 1)");
  }
  const std::size_t rank = NearestRank(values.size(), fraction);
  auto nth = values.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(values.begin(), nth, values.end());
  return *nth;
}

}  // namespace substisift

#endif  // SUBSTISIFT_PERCENTILE_HPP_
