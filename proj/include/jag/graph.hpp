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
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jag/dataset.hpp"
#include "jag/error.hpp"

namespace jag {

/// Which comparator family the graph was built with. Values are on-disk tags.
enum class BuildMode : std::uint8_t { threshold = 0, weight = 1 };

inline constexpr std::uint32_t kNoPoint = std::numeric_limits<std::uint32_t>::max();

/// Directed proximity graph over a dataset with out-degree at most R.
///
/// Each vertex owns R fixed adjacency slots. Slots and degrees are accessed
/// through std::atomic_ref so searches may read a vertex while a concurrent
/// inserter (holding that vertex's lock) rewrites it; a reader then sees some
/// mix of valid point ids, never garbage.
///
/// `schedule` holds the quantile levels (threshold mode, descending) or the
/// resolved weights (weight mode, ascending) used during construction.
template <AttributeSpace Space>
class JagIndex {
 public:
  JagIndex() = default;

  JagIndex(Dataset<Space> data, Space space, std::uint32_t degree, float alpha, BuildMode mode,
           std::vector<double> schedule)
      : data_(std::move(data)),
        space_(std::move(space)),
        degree_(degree),
        alpha_(alpha),
        mode_(mode),
        schedule_(std::move(schedule)) {
    require(degree_ > 0, ErrorCode::invalid_argument, "degree bound must be positive");
    require(alpha_ >= 1.0f, ErrorCode::invalid_argument, "alpha must be at least 1");
    require(!schedule_.empty(), ErrorCode::invalid_argument, "threshold/weight list is empty");
    slots_.assign(data_.size() * degree_, kNoPoint);
    degrees_.assign(data_.size(), 0);
  }

  const Dataset<Space>& data() const noexcept { return data_; }
  const Space& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t dim() const noexcept { return data_.dim(); }
  std::uint32_t degree_bound() const noexcept { return degree_; }
  float alpha() const noexcept { return alpha_; }
  BuildMode mode() const noexcept { return mode_; }
  std::span<const double> schedule() const noexcept { return schedule_; }

  bool has_entry() const noexcept { return entry_ != kNoPoint; }
  std::uint32_t entry() const noexcept { return entry_; }
  void set_entry(std::uint32_t id) {
    require(id < size(), ErrorCode::invalid_argument, "entry must be a valid point id");
    entry_ = id;
  }

  std::uint32_t out_degree(std::uint32_t v) const noexcept {
    return std::atomic_ref<std::uint32_t>(const_cast<std::uint32_t&>(degrees_[v]))
        .load(std::memory_order_acquire);
  }

  /// Copies v's current out-neighbors into `out` (replacing its contents).
  void copy_neighbors(std::uint32_t v, std::vector<std::uint32_t>& out) const {
    const std::uint32_t n = out_degree(v);
    out.resize(n);
    const std::uint32_t* row = slots_.data() + static_cast<std::size_t>(v) * degree_;
    for (std::uint32_t i = 0; i < n; ++i) {
      out[i] = std::atomic_ref<std::uint32_t>(const_cast<std::uint32_t&>(row[i]))
                 .load(std::memory_order_relaxed);
    }
  }

  /// Direct view of v's neighbors; only valid while no writer touches v.
  std::span<const std::uint32_t> neighbors(std::uint32_t v) const noexcept {
    return {slots_.data() + static_cast<std::size_t>(v) * degree_, degrees_[v]};
  }

  /// Replaces v's out-neighbors. In a concurrent build the caller holds v's lock.
  void set_neighbors(std::uint32_t v, std::span<const std::uint32_t> ids) {
    require(ids.size() <= degree_, ErrorCode::invalid_argument, "neighbor list exceeds degree bound");
    std::uint32_t* row = slots_.data() + static_cast<std::size_t>(v) * degree_;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      std::atomic_ref<std::uint32_t>(row[i]).store(ids[i], std::memory_order_relaxed);
    }
    std::atomic_ref<std::uint32_t>(degrees_[v]).store(static_cast<std::uint32_t>(ids.size()),
                                                      std::memory_order_release);
  }

  /// Appends a point to the dataset with an empty adjacency row.
  std::uint32_t add_point(VectorView vector, typename Space::attribute_type attribute) {
    const std::uint32_t id = data_.add(vector, std::move(attribute));
    slots_.resize(data_.size() * degree_, kNoPoint);
    degrees_.push_back(0);
    return id;
  }

  std::size_t edge_count() const noexcept {
    std::size_t total = 0;
    for (auto d : degrees_) total += d;
    return total;
  }

  /// Empty string when every structural invariant holds, otherwise the first
  /// violation found.
  std::string validate() const {
    std::vector<std::uint32_t> row;
    for (std::uint32_t v = 0; v < size(); ++v) {
      auto nbrs = neighbors(v);
      if (nbrs.size() > degree_) return "vertex " + std::to_string(v) + " exceeds degree bound";
      row.assign(nbrs.begin(), nbrs.end());
      std::sort(row.begin(), row.end());
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] >= size()) return "vertex " + std::to_string(v) + " has invalid neighbor";
        if (row[i] == v) return "vertex " + std::to_string(v) + " has a self-loop";
        if (i > 0 && row[i] == row[i - 1]) {
          return "vertex " + std::to_string(v) + " has a duplicate neighbor";
        }
      }
    }
    if (size() > 0 && !has_entry()) return "non-empty graph without entry vertex";
    return {};
  }

  /// Compares every persisted field (data, parameters, entry, adjacency).
  friend bool operator==(const JagIndex& a, const JagIndex& b) {
    if (!(a.data_ == b.data_) || a.degree_ != b.degree_ || a.alpha_ != b.alpha_ ||
        a.mode_ != b.mode_ || a.schedule_ != b.schedule_ || a.entry_ != b.entry_) {
      return false;
    }
    for (std::uint32_t v = 0; v < a.size(); ++v) {
      auto x = a.neighbors(v);
      auto y = b.neighbors(v);
      if (!std::equal(x.begin(), x.end(), y.begin(), y.end())) return false;
    }
    return true;
  }

 private:
  Dataset<Space> data_;
  Space space_;
  std::uint32_t degree_ = 0;
  float alpha_ = 1.2f;
  BuildMode mode_ = BuildMode::threshold;
  std::vector<double> schedule_;
  std::uint32_t entry_ = kNoPoint;
  std::vector<std::uint32_t> slots_;
  std::vector<std::uint32_t> degrees_;
};

}  // namespace jag
