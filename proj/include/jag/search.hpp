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
#include <cstddef>
#include <cstdint>
#include <vector>

#include "jag/graph.hpp"
#include "jag/metric.hpp"
#include "jag/unified.hpp"

namespace jag {

struct SearchParams {
  std::uint32_t k = 10;
  std::uint32_t beam = 10;  // l_s
};

struct SearchResult {
  std::vector<std::uint32_t> ids;
  std::vector<UnifiedDistance> distances;
  std::vector<bool> matches;
  std::uint64_t visited_count = 0;
  std::uint64_t dc_count = 0;
};

/// Membership set over point ids that clears in O(1) by bumping an epoch.
class EpochSet {
 public:
  void reset(std::size_t n) {
    if (tags_.size() < n) tags_.resize(n, 0);
    if (++epoch_ == 0) {
      std::fill(tags_.begin(), tags_.end(), 0);
      epoch_ = 1;
    }
  }
  bool contains(std::uint32_t id) const noexcept { return tags_[id] == epoch_; }
  /// True when `id` was not yet a member.
  bool insert(std::uint32_t id) noexcept {
    if (tags_[id] == epoch_) return false;
    tags_[id] = epoch_;
    return true;
  }

 private:
  std::vector<std::uint32_t> tags_;
  std::uint32_t epoch_ = 0;
};

/// Reusable per-worker buffers for beam search.
struct SearchScratch {
  struct Slot {
    Candidate candidate;
    bool expanded = false;
  };

  EpochSet enqueued;
  std::vector<Slot> beam;
  std::vector<Candidate> visited;
  std::vector<std::uint32_t> neighbors;
};

namespace detail {

// Beam search from the entry vertex under an arbitrary key function. Leaves
// the visited vertices (in expansion order) in scratch.visited and returns the
// number of key evaluations, one per vertex ever enqueued. A vertex dropped
// from the beam is never enqueued again.
template <class Space, class KeyFn>
std::uint64_t beam_search(const JagIndex<Space>& index, std::uint32_t beam_width, KeyFn&& key,
                          SearchScratch& scratch) {
  auto& beam = scratch.beam;
  auto& visited = scratch.visited;
  scratch.enqueued.reset(index.size());
  beam.clear();
  visited.clear();

  const std::uint32_t entry = index.entry();
  scratch.enqueued.insert(entry);
  beam.push_back({Candidate{key(entry), entry}, false});
  std::uint64_t evaluations = 1;

  std::size_t cursor = 0;
  while (cursor < beam.size()) {
    beam[cursor].expanded = true;
    const Candidate current = beam[cursor].candidate;
    visited.push_back(current);
    index.copy_neighbors(current.id, scratch.neighbors);

    std::size_t lowest_insert = beam.size();
    for (std::uint32_t u : scratch.neighbors) {
      if (!scratch.enqueued.insert(u)) continue;
      const Candidate c{key(u), u};
      ++evaluations;
      if (beam.size() >= beam_width && !(c < beam.back().candidate)) continue;
      auto pos = std::upper_bound(beam.begin(), beam.end(), c,
                                  [](const Candidate& x, const SearchScratch::Slot& s) {
                                    return x < s.candidate;
                                  });
      const auto at = static_cast<std::size_t>(pos - beam.begin());
      beam.insert(pos, {c, false});
      if (beam.size() > beam_width) beam.pop_back();
      lowest_insert = std::min(lowest_insert, at);
    }
    // Everything before the cursor is expanded; new entries may land earlier.
    cursor = std::min(lowest_insert, cursor + 1);
    while (cursor < beam.size() && beam[cursor].expanded) ++cursor;
  }
  return evaluations;
}

inline std::vector<Candidate> top_k(std::span<const Candidate> pool, std::size_t k) {
  std::vector<Candidate> out(std::min(k, pool.size()));
  std::partial_sort_copy(pool.begin(), pool.end(), out.begin(), out.end());
  return out;
}

inline void validate(const SearchParams& params) {
  require(params.k > 0, ErrorCode::invalid_argument, "k must be positive");
  require(params.beam >= params.k, ErrorCode::invalid_argument, "beam must be at least k");
}

}  // namespace detail

struct GreedyResult {
  std::vector<Candidate> top;      // best k visited vertices
  std::vector<Candidate> visited;  // in expansion order
  std::uint64_t dc_count = 0;
};

/// Greedy beam search under `key(id) -> UnifiedDistance`. Each key evaluation
/// is expected to perform exactly one vector distance computation.
template <class Space, class KeyFn>
GreedyResult greedy_search(const JagIndex<Space>& index, SearchParams params, KeyFn&& key,
                           SearchScratch* scratch = nullptr) {
  detail::validate(params);
  require(index.has_entry(), ErrorCode::empty_index, "index has no points");
  SearchScratch local;
  SearchScratch& s = scratch ? *scratch : local;
  GreedyResult result;
  result.dc_count = detail::beam_search(index, params.beam, key, s);
  result.visited = s.visited;
  result.top = detail::top_k(s.visited, params.k);
  return result;
}

/// Filtered top-k query: filter distance first, vector distance second.
///
/// Returned ids are the best visited vertices under that order, so they can
/// include non-matching points when fewer than k matches were reached; the
/// `matches` flags mark which ones satisfy the filter.
template <class Space>
SearchResult query(const JagIndex<Space>& index, VectorView q,
                   const typename Space::filter_type& filter, SearchParams params,
                   SearchScratch* scratch = nullptr, DcCounter* counter = nullptr) {
  detail::validate(params);
  require(index.has_entry(), ErrorCode::empty_index, "index has no points");
  require(q.size() == index.dim(), ErrorCode::dimension_mismatch,
          "query dimension differs from index");
  require(filter_width(filter) == index.data().attribute_width(), ErrorCode::dimension_mismatch,
          "filter width differs from indexed attributes");

  const auto& data = index.data();
  const std::size_t d = index.dim();
  auto key = [&](std::uint32_t u) {
    return UnifiedDistance{Space::filter_distance(data.attribute(u), filter),
                           sq_l2_unchecked(q.data(), data.vector_data(u), d)};
  };

  SearchScratch local;
  SearchScratch& s = scratch ? *scratch : local;
  SearchResult result;
  result.dc_count = detail::beam_search(index, params.beam, key, s);
  result.visited_count = s.visited.size();
  for (const auto& c : detail::top_k(s.visited, params.k)) {
    result.ids.push_back(c.id);
    result.distances.push_back(c.distance);
    result.matches.push_back(Space::matches(data.attribute(c.id), filter));
  }
  if (counter) counter->add(result.dc_count);
  return result;
}

/// Unfiltered top-k by vector distance alone.
template <class Space>
SearchResult search_unfiltered(const JagIndex<Space>& index, VectorView q, SearchParams params,
                               SearchScratch* scratch = nullptr, DcCounter* counter = nullptr) {
  detail::validate(params);
  require(index.has_entry(), ErrorCode::empty_index, "index has no points");
  require(q.size() == index.dim(), ErrorCode::dimension_mismatch,
          "query dimension differs from index");
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
  for (const auto& c : detail::top_k(s.visited, params.k)) {
    result.ids.push_back(c.id);
    result.distances.push_back(c.distance);
    result.matches.push_back(true);
  }
  if (counter) counter->add(result.dc_count);
  return result;
}

}  // namespace jag
