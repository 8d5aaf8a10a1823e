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

// Plain single-metric Vamana-style builder and searcher used as an oracle.
// Written against raw float arrays only; shares no code with the library
// apart from the distance functor the caller passes in.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using DistFn = std::function<double(const float*, const float*)>;

class ReferenceVamana {
 public:
  ReferenceVamana(const std::vector<float>& vectors, std::size_t dim, std::uint32_t degree,
                  double alpha, std::uint32_t build_beam, DistFn dist)
      : data_(vectors), dim_(dim), degree_(degree), alpha_(alpha), beam_(build_beam),
        dist_(std::move(dist)) {
    const std::size_t n = data_.size() / dim_;
    adj_.resize(n);
    quota_ = static_cast<std::size_t>(std::ceil(0.9 * degree_ - 1e-9));
    if (quota_ == 0) quota_ = 1;
    for (std::uint32_t p = 1; p < n; ++p) insert(p);
  }

  const std::vector<std::vector<std::uint32_t>>& adjacency() const { return adj_; }

  // Returns (top-k ids, visited ids) of a beam search for the query vector.
  std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> search(const float* q,
                                                                           std::size_t k,
                                                                           std::size_t beam) const {
    using Item = std::pair<double, std::uint32_t>;
    std::set<Item> frontier;  // candidate list, at most `beam` items
    std::set<std::uint32_t> seen;
    std::set<std::uint32_t> done;
    std::vector<Item> expanded;
    frontier.insert({dist_(q, at(0)), 0});
    seen.insert(0);
    for (;;) {
      auto next = std::find_if(frontier.begin(), frontier.end(),
                               [&](const Item& it) { return !done.count(it.second); });
      if (next == frontier.end()) break;
      const Item cur = *next;
      done.insert(cur.second);
      expanded.push_back(cur);
      for (std::uint32_t u : adj_[cur.second]) {
        if (!seen.insert(u).second) continue;
        frontier.insert({dist_(q, at(u)), u});
        if (frontier.size() > beam) frontier.erase(std::prev(frontier.end()));
      }
    }
    std::vector<Item> sorted = expanded;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::uint32_t> top;
    for (std::size_t i = 0; i < sorted.size() && i < k; ++i) top.push_back(sorted[i].second);
    std::vector<std::uint32_t> visited;
    for (const auto& it : expanded) visited.push_back(it.second);
    return {top, visited};
  }

 private:
  const float* at(std::uint32_t i) const { return data_.data() + static_cast<std::size_t>(i) * dim_; }

  std::vector<std::uint32_t> prune(std::uint32_t p, std::vector<std::uint32_t> pool) const {
    std::vector<std::pair<double, std::uint32_t>> ranked;
    for (auto v : pool) {
      if (v != p) ranked.push_back({dist_(at(p), at(v)), v});
    }
    std::sort(ranked.begin(), ranked.end());
    ranked.erase(std::unique(ranked.begin(), ranked.end()), ranked.end());
    std::vector<std::uint32_t> out;
    for (const auto& [dpv, v] : ranked) {
      bool keep = true;
      for (auto u : out) {
        if (!(alpha_ * alpha_ * dist_(at(u), at(v)) > dpv)) {
          keep = false;
          break;
        }
      }
      if (keep) out.push_back(v);
      if (out.size() >= quota_) break;
    }
    return out;
  }

  void insert(std::uint32_t p) {
    auto [top, visited] = search(at(p), 1, beam_);
    (void)top;
    adj_[p] = prune(p, visited);
    for (auto v : adj_[p]) {
      auto& row = adj_[v];
      if (std::find(row.begin(), row.end(), p) != row.end()) continue;
      row.push_back(p);
      if (row.size() > degree_) row = prune(v, row);
    }
  }

  const std::vector<float>& data_;
  std::size_t dim_;
  std::uint32_t degree_;
  double alpha_;
  std::uint32_t beam_;
  DistFn dist_;
  std::size_t quota_ = 1;
  std::vector<std::vector<std::uint32_t>> adj_;
};

}  // namespace oracle
