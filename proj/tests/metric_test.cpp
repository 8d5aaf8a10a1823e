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

#include <gtest/gtest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "test_support.hpp"

namespace {

using namespace jag;

TEST(SqL2, Examples) {
  const std::vector<float> a{0, 0};
  const std::vector<float> b{3, 4};
  EXPECT_EQ(sq_l2(a, b), 25.0);
  EXPECT_EQ(sq_l2(b, b), 0.0);
}

TEST(SqL2, DimensionMismatch) {
  const std::vector<float> a{0, 0};
  const std::vector<float> b{3, 4, 5};
  try {
    sq_l2(a, b);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
  }
}

TEST(SqL2, MatchesNaiveLoop) {
  auto rng = make_rng(21, "metric");
  for (std::size_t d : {1u, 7u, 8u, 16u, 33u, 100u}) {
    for (int i = 0; i < 50; ++i) {
      std::vector<float> a(d);
      std::vector<float> b(d);
      for (auto& x : a) x = static_cast<float>(standard_normal(rng));
      for (auto& x : b) x = static_cast<float>(standard_normal(rng));
      long double naive = 0;
      for (std::size_t j = 0; j < d; ++j) {
        const long double diff = static_cast<long double>(a[j]) - b[j];
        naive += diff * diff;
      }
      const double ours = sq_l2(a, b);
      EXPECT_NEAR(ours, static_cast<double>(naive), 1e-6 * std::max(1.0L, naive));
      EXPECT_EQ(ours, sq_l2(b, a));
      EXPECT_GE(ours, 0.0);
    }
  }
}

TEST(DcCounter, CountsEveryEvaluationAcrossThreads) {
  DcCounter counter;
  const std::vector<float> a{1, 2};
  const std::vector<float> b{2, 3};
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&] {
      for (int i = 0; i < 1000; ++i) sq_l2(a, b, counter);
    });
  }
  for (auto& th : pool) th.join();
  EXPECT_EQ(counter.value(), 4000u);
  counter.reset();
  EXPECT_EQ(counter.value(), 0u);
}

TEST(Random, StreamsAreIndependentAndReproducible) {
  auto a = make_rng(5, "alpha");
  auto b = make_rng(5, "alpha");
  auto c = make_rng(5, "beta");
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
}

TEST(Random, SampleWithoutReplacementIsDistinct) {
  auto rng = make_rng(6, "sample");
  for (std::uint32_t pop : {1u, 5u, 100u, 1000u}) {
    for (std::uint32_t count : {0u, 1u, 3u, 500u}) {
      auto s = sample_without_replacement(rng, pop, count);
      EXPECT_EQ(s.size(), std::min(pop, count));
      std::sort(s.begin(), s.end());
      EXPECT_EQ(std::adjacent_find(s.begin(), s.end()), s.end());
      for (auto v : s) EXPECT_LT(v, pop);
    }
  }
}

TEST(Random, UniformBelowStaysInRange) {
  auto rng = make_rng(7, "uniform");
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) ++hist[uniform_below(rng, 7)];
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

}  // namespace
