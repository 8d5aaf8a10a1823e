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
using testing_support::range_dataset;

TEST(GreedySearch, TwoVertexPathDescends) {
  const Dataset<RangeSpace> data(1, {5.0f, 1.0f}, {Scalar{0}, Scalar{0}});
  JagIndex<RangeSpace> index(data, RangeSpace{}, 2, 1.2f, BuildMode::threshold, {0.0});
  index.set_entry(0);
  const std::vector<std::uint32_t> edge{1};
  index.set_neighbors(0, edge);
  const std::vector<float> q{0.0f};
  const auto r = search_unfiltered(index, q, SearchParams{1, 1});
  ASSERT_EQ(r.ids.size(), 1u);
  EXPECT_EQ(r.ids[0], 1u);
  EXPECT_EQ(r.dc_count, 2u);
}

TEST(GreedySearch, ExhaustiveBeamIsExact) {
  BuildParams p;
  p.degree = 12;
  p.build_beam = 24;
  const auto index = build(range_dataset(500, 8, 51), p);
  const auto queries = random_vectors(20, 8, 52);
  for (std::size_t i = 0; i < 20; ++i) {
    const VectorView q(queries.data() + i * 8, 8);
    const auto r = search_unfiltered(index, q, SearchParams{10, 500});
    std::vector<std::pair<double, std::uint32_t>> all;
    for (std::uint32_t v = 0; v < 500; ++v) all.push_back({sq_l2(q, index.data().vector(v)), v});
    std::sort(all.begin(), all.end());
    for (std::size_t j = 0; j < 10; ++j) EXPECT_EQ(r.ids[j], all[j].second);
  }
}

TEST(GreedySearch, DeterministicVisitedSet) {
  BuildParams p;
  p.degree = 10;
  p.build_beam = 20;
  const auto index = build(range_dataset(300, 8, 53), p);
  const auto q = random_vectors(1, 8, 54);
  auto key = [&](std::uint32_t u) {
    return UnifiedDistance{0.0, sq_l2(VectorView(q), index.data().vector(u))};
  };
  const auto a = greedy_search(index, SearchParams{5, 30}, key);
  const auto b = greedy_search(index, SearchParams{5, 30}, key);
  ASSERT_EQ(a.visited.size(), b.visited.size());
  for (std::size_t i = 0; i < a.visited.size(); ++i) EXPECT_EQ(a.visited[i].id, b.visited[i].id);
}

// dc_count counts each vertex whose key was evaluated, entry included.
TEST(GreedySearch, DcCountEqualsKeyEvaluations) {
  BuildParams p;
  p.degree = 10;
  p.build_beam = 20;
  const auto index = build(range_dataset(400, 8, 55), p);
  const auto q = random_vectors(1, 8, 56);
  std::uint64_t calls = 0;
  auto key = [&](std::uint32_t u) {
    ++calls;
    return UnifiedDistance{0.0, sq_l2(VectorView(q), index.data().vector(u))};
  };
  const auto r = greedy_search(index, SearchParams{10, 40}, key);
  EXPECT_EQ(r.dc_count, calls);
  DcCounter counter;
  const auto r2 = query(index, q, Range(0, 1e6), SearchParams{10, 40}, nullptr, &counter);
  EXPECT_EQ(counter.value(), r2.dc_count);
  EXPECT_EQ(r2.dc_count, calls);
}

TEST(Query, SelectivityOneEqualsUnfiltered) {
  BuildParams p;
  p.degree = 12;
  p.build_beam = 24;
  const auto index = build(range_dataset(800, 8, 57), p);
  const auto queries = random_vectors(30, 8, 58);
  for (std::size_t i = 0; i < 30; ++i) {
    const VectorView q(queries.data() + i * 8, 8);
    const auto filtered = query(index, q, Range(-1, 2e6), SearchParams{10, 40});
    const auto plain = search_unfiltered(index, q, SearchParams{10, 40});
    EXPECT_EQ(filtered.ids, plain.ids);
    EXPECT_EQ(filtered.dc_count, plain.dc_count);
  }
}

// One-dimensional vectors and attributes with filter [3, 5]: the search walks
// toward matching attributes before refining by vector distance.
TEST(Query, RangeLayoutReachesMatchesFirst) {
  const std::vector<float> vecs{0, 1, 2, 3, 4, 5, 6, 7};
  const std::vector<Scalar> attrs{Scalar{9}, Scalar{8}, Scalar{7}, Scalar{6},
                                  Scalar{5}, Scalar{4}, Scalar{3}, Scalar{2}};
  const Dataset<RangeSpace> data(1, vecs, attrs);
  JagIndex<RangeSpace> index(data, RangeSpace{}, 2, 1.2f, BuildMode::threshold, {0.0});
  index.set_entry(0);
  for (std::uint32_t v = 0; v < 8; ++v) {
    std::vector<std::uint32_t> row;
    if (v > 0) row.push_back(v - 1);
    if (v < 7) row.push_back(v + 1);
    index.set_neighbors(v, row);
  }
  const std::vector<float> q{0.0f};
  const auto r = query(index, q, Range(3, 5), SearchParams{3, 3});
  EXPECT_EQ(r.ids, (std::vector<std::uint32_t>{4, 5, 6}));
  EXPECT_EQ(r.matches, (std::vector<bool>{true, true, true}));
  // Filter distance never increases along the expansion order until matches.
  auto key = [&](std::uint32_t u) {
    return UnifiedDistance{RangeSpace::filter_distance(index.data().attribute(u), Range(3, 5)),
                           sq_l2(VectorView(q), index.data().vector(u))};
  };
  const auto g = greedy_search(index, SearchParams{1, 1}, key);
  for (std::size_t i = 1; i < g.visited.size(); ++i) {
    EXPECT_LE(g.visited[i].distance.primary, g.visited[i - 1].distance.primary);
  }
  EXPECT_EQ(g.visited.back().distance.primary, 0.0);
}

TEST(Query, ExhaustiveBeamGivesFullRecallOnSubsets) {
  auto wl = gen_subset_workload(500, 20, 59);
  const Dataset<SubsetSpace> data(8, random_vectors(500, 8, 59), wl.attributes);
  const QuerySet<SubsetSpace> qs(8, random_vectors(20, 8, 60), wl.filters);
  BuildParams p;
  p.degree = 16;
  p.build_beam = 32;
  const auto index = build(data, p);
  const auto truth = brute_force_ground_truth(data, qs, 10);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const auto r = query(index, qs.vector(i), qs.filter(i), SearchParams{10, 500});
    EXPECT_EQ(recall_at_k(r.ids, truth[i], 10), 1.0);
  }
}

TEST(Query, BeamMonotoneOnAverage) {
  auto wl = gen_range_workload(3000, 100, 61);
  const Dataset<RangeSpace> data(8, random_vectors(3000, 8, 61), wl.attributes);
  const QuerySet<RangeSpace> qs(8, random_vectors(100, 8, 62), wl.filters);
  BuildParams p;
  p.degree = 16;
  p.build_beam = 32;
  const auto index = build(data, p);
  const auto truth = brute_force_ground_truth(data, qs, 10);
  double prev = -1;
  for (std::uint32_t beam : {10u, 20u, 40u, 80u, 160u}) {
    double sum = 0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      sum += recall_at_k(query(index, qs.vector(i), qs.filter(i), SearchParams{10, beam}).ids,
                         truth[i], 10);
    }
    const double mean = sum / static_cast<double>(qs.size());
    EXPECT_GE(mean, prev - 1e-9) << "beam " << beam;
    prev = mean;
  }
}

TEST(Query, Errors) {
  const auto index = build(range_dataset(50, 4, 63), BuildParams{});
  const std::vector<float> bad(3, 0.0f);
  try {
    query(index, bad, Range(0, 1), SearchParams{});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
  }
  const std::vector<float> ok(4, 0.0f);
  EXPECT_THROW(query(index, ok, Range(0, 1), SearchParams{10, 5}), Error);
  const JagIndex<RangeSpace> empty(Dataset<RangeSpace>(4, {}, {}), RangeSpace{}, 8, 1.2f,
                                   BuildMode::threshold, {0.0});
  try {
    query(empty, ok, Range(0, 1), SearchParams{});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_index);
  }
}

}  // namespace
