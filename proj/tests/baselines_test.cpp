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

#include <algorithm>

#include "test_support.hpp"

namespace {

using namespace jag;
using testing_support::random_vectors;

template <class Space, class Workload>
void check_pre_filter(const Workload& wl, std::size_t n, std::size_t nq, std::uint64_t seed) {
  const Dataset<Space> data(8, random_vectors(n, 8, seed), wl.attributes);
  const QuerySet<Space> qs(8, random_vectors(nq, 8, seed + 1), wl.filters);
  const auto truth = brute_force_ground_truth(data, qs, 10);
  for (std::size_t i = 0; i < nq; ++i) {
    const auto r = pre_filter_search(data, qs.vector(i), qs.filter(i), 10);
    EXPECT_EQ(r.ids, truth[i]);
    std::size_t matching = 0;
    for (std::uint32_t v = 0; v < n; ++v) matching += Space::matches(data.attribute(v), qs.filter(i));
    EXPECT_EQ(r.dc_count, matching);
  }
}

TEST(PreFilter, EqualsBruteForceForEveryFamily) {
  check_pre_filter<LabelSpace>(gen_label_workload(700, 40, 12, 71), 700, 40, 71);
  check_pre_filter<RangeSpace>(gen_range_workload(700, 40, 72), 700, 40, 72);
  check_pre_filter<SubsetSpace>(gen_subset_workload(700, 40, 73), 700, 40, 73);
  check_pre_filter<BooleanSpace>(gen_boolean_workload(700, 40, 74), 700, 40, 74);
}

TEST(PreFilter, EdgeCases) {
  const Dataset<LabelSpace> one(2, {1, 1}, {Label{4}});
  EXPECT_EQ(pre_filter_search(one, std::vector<float>{0, 0}, Equality{4}, 10).ids,
            std::vector<std::uint32_t>{0});
  EXPECT_TRUE(pre_filter_search(one, std::vector<float>{0, 0}, Equality{5}, 10).ids.empty());
}

TEST(BruteForce, TiesBrokenById) {
  const Dataset<LabelSpace> data(1, {1, 1, 1, 1}, std::vector<Label>(4, Label{0}));
  const QuerySet<LabelSpace> qs(1, {0}, {Equality{0}});
  EXPECT_EQ(brute_force_ground_truth(data, qs, 3)[0], (std::vector<std::uint32_t>{0, 1, 2}));
}

TEST(BruteForce, ThreadCountDoesNotMatter) {
  auto wl = gen_range_workload(500, 30, 75);
  const Dataset<RangeSpace> data(8, random_vectors(500, 8, 75), wl.attributes);
  const QuerySet<RangeSpace> qs(8, random_vectors(30, 8, 76), wl.filters);
  EXPECT_EQ(brute_force_ground_truth(data, qs, 10, 1), brute_force_ground_truth(data, qs, 10, 4));
}

TEST(PostFilter, ResultsAlwaysMatchAndExhaustiveBeamIsExact) {
  auto wl = gen_range_workload(600, 30, 77);
  const Dataset<RangeSpace> data(8, random_vectors(600, 8, 77), wl.attributes);
  const QuerySet<RangeSpace> qs(8, random_vectors(30, 8, 78), wl.filters);
  BuildParams p;
  p.degree = 16;
  p.build_beam = 32;
  p.mode = WeightMultipliers{{0.0}, 1.0};
  const auto index = build(data, p);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const auto small = post_filter_search(index, qs.vector(i), qs.filter(i), SearchParams{10, 20});
    for (auto id : small.ids) EXPECT_TRUE(RangeSpace::matches(data.attribute(id), qs.filter(i)));
    const auto full = post_filter_search(index, qs.vector(i), qs.filter(i), SearchParams{10, 600});
    EXPECT_EQ(full.ids, pre_filter_search(data, qs.vector(i), qs.filter(i), 10).ids);
  }
}

TEST(PostFilter, SelectivityOneEqualsUnfiltered) {
  auto wl = gen_range_workload(600, 1, 79);
  const Dataset<RangeSpace> data(8, random_vectors(600, 8, 79), wl.attributes);
  BuildParams p;
  p.degree = 16;
  p.mode = WeightMultipliers{{0.0}, 1.0};
  const auto index = build(data, p);
  const auto q = random_vectors(1, 8, 80);
  EXPECT_EQ(post_filter_search(index, q, Range(-1, 2e6), SearchParams{10, 30}).ids,
            search_unfiltered(index, q, SearchParams{10, 30}).ids);
}

}  // namespace
