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

#include <compare>
#include <cstdint>

#include "jag/attributes.hpp"
#include "jag/metric.hpp"

namespace jag {

/// (attribute-or-filter distance, squared vector distance), ordered
/// lexicographically. Primary components compare exactly.
struct UnifiedDistance {
  double primary = 0.0;
  double secondary = 0.0;

  friend bool operator==(const UnifiedDistance&, const UnifiedDistance&) = default;
  friend bool operator<(const UnifiedDistance& a, const UnifiedDistance& b) noexcept {
    if (a.primary != b.primary) return a.primary < b.primary;
    return a.secondary < b.secondary;
  }
};

/// A point id with its distance; ties on both components go to the smaller id.
struct Candidate {
  UnifiedDistance distance;
  std::uint32_t id = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
  friend bool operator<(const Candidate& a, const Candidate& b) noexcept {
    if (a.distance.primary != b.distance.primary) return a.distance.primary < b.distance.primary;
    if (a.distance.secondary != b.distance.secondary) {
      return a.distance.secondary < b.distance.secondary;
    }
    return a.id < b.id;
  }
};

inline std::strong_ordering order(const Candidate& a, const Candidate& b) noexcept {
  if (a < b) return std::strong_ordering::less;
  if (b < a) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

/// Family-erased point used by the standalone comparators.
struct Point {
  std::uint32_t id = 0;
  VectorView vector;
  Attribute attribute;
};

/// D_A^t(p, u): capped attribute distance, then vector distance.
inline UnifiedDistance build_distance(const Point& p, const Point& u, double threshold,
                                      const AttrDistanceConfig& cfg = {}) {
  return {capped_attribute_distance(p.attribute, u.attribute, threshold, cfg),
          sq_l2(p.vector, u.vector)};
}

/// D_F(q, u): filter distance, then vector distance.
inline UnifiedDistance query_distance(VectorView q, const Filter& f, const Point& u) {
  return {filter_distance(u.attribute, f), sq_l2(q, u.vector)};
}

/// Orders u and v as seen from p under threshold t.
inline std::strong_ordering compare_build(const Point& p, const Point& u, const Point& v,
                                          double threshold, const AttrDistanceConfig& cfg = {}) {
  return order({build_distance(p, u, threshold, cfg), u.id},
               {build_distance(p, v, threshold, cfg), v.id});
}

/// Orders u and v as seen from the query (q, f).
inline std::strong_ordering compare_query(VectorView q, const Filter& f, const Point& u,
                                          const Point& v) {
  return order({query_distance(q, f, u), u.id}, {query_distance(q, f, v), v.id});
}

/// D_A^w(u, v) = w * dist_A + squared vector distance.
inline double weighted_build_distance(const Point& u, const Point& v, double weight,
                                      const AttrDistanceConfig& cfg = {}) {
  require(weight >= 0.0, ErrorCode::invalid_argument, "weight must be non-negative");
  return weight * attribute_distance(u.attribute, v.attribute, cfg) + sq_l2(u.vector, v.vector);
}

}  // namespace jag
