// Copyright 2026 The JAG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>

#include "jag/error.hpp"

namespace jag {

using VectorView = std::span<const float>;

/// Number of vector-distance evaluations. Shared across query workers.
class DcCounter {
 public:
  void add(std::uint64_t n = 1) noexcept { count_.fetch_add(n, std::memory_order_relaxed); }
  std::uint64_t value() const noexcept { return count_.load(std::memory_order_relaxed); }
  void reset() noexcept { count_.store(0, std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> count_{0};
};

// Squared Euclidean distance over float storage with double accumulation.
// Eight independent partial sums keep the summation order fixed (and therefore
// bit-reproducible) while leaving room for the compiler to vectorize.
inline double sq_l2_unchecked(const float* a, const float* b, std::size_t d) noexcept {
  double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 8 <= d; i += 8) {
    for (std::size_t j = 0; j < 8; ++j) {
      const double diff = static_cast<double>(a[i + j]) - static_cast<double>(b[i + j]);
      acc[j] += diff * diff;
    }
  }
  for (std::size_t j = 0; i < d; ++i, ++j) {
    const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc[j] += diff * diff;
  }
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
}

inline double sq_l2(VectorView a, VectorView b) {
  require(a.size() == b.size(), ErrorCode::dimension_mismatch, "vectors differ in dimension");
  return sq_l2_unchecked(a.data(), b.data(), a.size());
}

inline double sq_l2(VectorView a, VectorView b, DcCounter& counter) {
  const double d = sq_l2(a, b);
  counter.add();
  return d;
}

}  // namespace jag
