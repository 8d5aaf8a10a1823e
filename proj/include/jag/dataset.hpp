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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "jag/attributes.hpp"
#include "jag/error.hpp"
#include "jag/metric.hpp"

namespace jag {

/// Points of one attribute family: row-major float vectors plus attributes.
template <AttributeSpace Space>
class Dataset {
 public:
  using attribute_type = typename Space::attribute_type;

  Dataset() = default;
  explicit Dataset(std::size_t dim) : dim_(dim) {
    require(dim > 0, ErrorCode::invalid_argument, "dimension must be positive");
  }

  Dataset(std::size_t dim, std::vector<float> vectors, std::vector<attribute_type> attributes)
      : dim_(dim), vectors_(std::move(vectors)), attributes_(std::move(attributes)) {
    require(dim > 0, ErrorCode::invalid_argument, "dimension must be positive");
    require(vectors_.size() == dim_ * attributes_.size(), ErrorCode::dimension_mismatch,
            "vector storage does not match point count times dimension");
    require(attributes_.size() <= UINT32_MAX - 1, ErrorCode::invalid_argument,
            "too many points for 32-bit ids");
    for (float x : vectors_) {
      require(std::isfinite(x), ErrorCode::invalid_argument, "vector coordinates must be finite");
    }
    if (!attributes_.empty()) {
      width_ = jag::attribute_width(attributes_.front());
      for (const auto& a : attributes_) {
        require(jag::attribute_width(a) == width_, ErrorCode::dimension_mismatch,
                "attribute widths differ within the dataset");
      }
    }
  }

  std::uint32_t add(VectorView vector, attribute_type attribute) {
    require(vector.size() == dim_, ErrorCode::dimension_mismatch,
            "vector dimension differs from dataset");
    for (float x : vector) {
      require(std::isfinite(x), ErrorCode::invalid_argument, "vector coordinates must be finite");
    }
    if (attributes_.empty()) {
      width_ = jag::attribute_width(attribute);
    } else {
      require(jag::attribute_width(attribute) == width_, ErrorCode::dimension_mismatch,
              "attribute width differs from dataset");
    }
    vectors_.insert(vectors_.end(), vector.begin(), vector.end());
    attributes_.push_back(std::move(attribute));
    return static_cast<std::uint32_t>(attributes_.size() - 1);
  }

  std::size_t size() const noexcept { return attributes_.size(); }
  bool empty() const noexcept { return attributes_.empty(); }
  std::size_t dim() const noexcept { return dim_; }
  /// Bitset width / boolean variable count; 0 for label and scalar data.
  std::size_t attribute_width() const noexcept { return width_; }

  VectorView vector(std::uint32_t i) const noexcept {
    return {vectors_.data() + static_cast<std::size_t>(i) * dim_, dim_};
  }
  const float* vector_data(std::uint32_t i) const noexcept {
    return vectors_.data() + static_cast<std::size_t>(i) * dim_;
  }
  const attribute_type& attribute(std::uint32_t i) const noexcept { return attributes_[i]; }

  std::span<const float> raw_vectors() const noexcept { return vectors_; }
  std::span<const attribute_type> attributes() const noexcept { return attributes_; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t dim_ = 0;
  std::size_t width_ = 0;
  std::vector<float> vectors_;
  std::vector<attribute_type> attributes_;
};

/// Query vectors paired with filters.
template <AttributeSpace Space>
class QuerySet {
 public:
  using filter_type = typename Space::filter_type;

  QuerySet() = default;
  QuerySet(std::size_t dim, std::vector<float> vectors, std::vector<filter_type> filters)
      : dim_(dim), vectors_(std::move(vectors)), filters_(std::move(filters)) {
    require(dim > 0, ErrorCode::invalid_argument, "dimension must be positive");
    require(vectors_.size() == dim_ * filters_.size(), ErrorCode::dimension_mismatch,
            "query vector storage does not match query count times dimension");
  }

  std::size_t size() const noexcept { return filters_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  VectorView vector(std::size_t i) const noexcept { return {vectors_.data() + i * dim_, dim_}; }
  const filter_type& filter(std::size_t i) const noexcept { return filters_[i]; }
  std::span<const float> raw_vectors() const noexcept { return vectors_; }
  std::span<const filter_type> filters() const noexcept { return filters_; }

  friend bool operator==(const QuerySet&, const QuerySet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<float> vectors_;
  std::vector<filter_type> filters_;
};

/// Fraction of `data` matching `filter`.
template <AttributeSpace Space>
double selectivity(const Dataset<Space>& data, const typename Space::filter_type& filter) {
  if (data.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& a : data.attributes()) hits += Space::matches(a, filter) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

}  // namespace jag
