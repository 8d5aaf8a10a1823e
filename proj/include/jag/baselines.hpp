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

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <queue>
#include <thread>
#include <vector>

#include "jag/dataset.hpp"
#include "jag/search.hpp"

namespace jag {

struct ScanResult {
  std::vector<std::uint32_t> ids;
  std::uint64_t dc_count = 0;
};

/// Exact filtered top-k by scanning: one distance per matching point, ties by
/// ascending id. Fewer than k matches returns all of them.
template <AttributeSpace Space>
ScanResult pre_filter_search(const Dataset<Space>& data, VectorView q,
                             const typename Space::filter_type& filter, std::uint32_t k) {
  require(q.size() == data.dim(), ErrorCode::dimension_mismatch, "query dimension differs");
  ScanResult result;
  if (k == 0) return result;
  // Max-heap on (distance, id) holding the best k seen so far.
  std::priority_queue<std::pair<double, std::uint32_t>> heap;
  for (std::uint32_t i = 0; i < data.size(); ++i) {
    if (!Space::matches(data.attribute(i), filter)) continue;
    const double dist = sq_l2_unchecked(q.data(), data.vector_data(i), data.dim());
    ++result.dc_count;
    if (heap.size() < k) {
      heap.emplace(dist, i);
    } else if (std::pair{dist, i} < heap.top()) {
      heap.pop();
      heap.emplace(dist, i);
    }
  }
  result.ids.resize(heap.size());
  for (auto it = result.ids.rbegin(); it != result.ids.rend(); ++it) {
    *it = heap.top().second;
    heap.pop();
  }
  return result;
}

/// Unfiltered beam search followed by discarding non-matching vertices: the
/// visited set is ranked by vector distance and the first k matches returned.
template <AttributeSpace Space>
SearchResult post_filter_search(const JagIndex<Space>& index, VectorView q,
                                const typename Space::filter_type& filter, SearchParams params,
                                SearchScratch* scratch = nullptr) {
  detail::validate(params);
  require(index.has_entry(), ErrorCode::empty_index, "index has no points");
  require(q.size() == index.dim(), ErrorCode::dimension_mismatch, "query dimension differs");
  const auto& data = index.data();
  const std::size_t d = index.dim();
  auto key = [&](std::uint32_t u) {
    return UnifiedDistance{0.0, sq_l2_unchecked(q.data(), data.vector_data(u), d)};
  };
  SearchScratch local;
  SearchScratch& s = scratch ? *scratch : local;
  SearchResult result;
  result.dc_count = detail::beam_search(index, params.beam, key, s);
  result.visited_count = s.visited.size();
  std::vector<Candidate> ranked(s.visited.begin(), s.visited.end());
  std::sort(ranked.begin(), ranked.end());
  for (const auto& c : ranked) {
    if (result.ids.size() == params.k) break;
    if (!Space::matches(data.attribute(c.id), filter)) continue;
    result.ids.push_back(c.id);
    result.distances.push_back(c.distance);
    result.matches.push_back(true);
  }
  return result;
}

/// Exact filtered top-k for every query (ties by id); the recall oracle.
template <AttributeSpace Space>
std::vector<std::vector<std::uint32_t>> brute_force_ground_truth(const Dataset<Space>& data,
                                                                 const QuerySet<Space>& queries,
                                                                 std::uint32_t k,
                                                                 unsigned threads = 1) {
  require(queries.size() == 0 || queries.dim() == data.dim(), ErrorCode::dimension_mismatch,
          "query dimension differs from dataset");
  std::vector<std::vector<std::uint32_t>> truth(queries.size());
  auto solve = [&](std::size_t qi) {
    std::vector<std::pair<double, std::uint32_t>> hits;
    const auto q = queries.vector(qi);
    const auto& filter = queries.filter(qi);
    for (std::uint32_t i = 0; i < data.size(); ++i) {
      if (Space::matches(data.attribute(i), filter)) {
        hits.emplace_back(sq_l2_unchecked(q.data(), data.vector_data(i), data.dim()), i);
      }
    }
    std::sort(hits.begin(), hits.end());
    auto& out = truth[qi];
    for (std::size_t j = 0; j < hits.size() && j < k; ++j) out.push_back(hits[j].second);
  };
  if (threads <= 1) {
    for (std::size_t qi = 0; qi < queries.size(); ++qi) solve(qi);
    return truth;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t qi = next++; qi < queries.size(); qi = next++) solve(qi);
    });
  }
  for (auto& th : pool) th.join();
  return truth;
}

}  // namespace jag
