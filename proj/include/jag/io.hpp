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

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "jag/binary.hpp"
#include "jag/dataset.hpp"

namespace jag {

// Dataset files (all little-endian):
//
//   fbin  u32 n | u32 d | n*d f32
//   abin  u32 n | u8 family | attribute payload (binary.hpp)
//   qbin  u32 n | u8 family | filter payload (binary.hpp)
//   gt    u32 n | u32 k | n*k u32 ids, padded with 0xffffffff

inline constexpr std::uint32_t kGtPadding = std::numeric_limits<std::uint32_t>::max();

struct VectorFile {
  std::uint32_t n = 0;
  std::uint32_t dim = 0;
  std::vector<float> values;
};

inline void write_fbin(const std::string& path, std::span<const float> values, std::uint32_t dim) {
  require(dim > 0 && values.size() % dim == 0, ErrorCode::dimension_mismatch,
          "vector payload is not a multiple of the dimension");
  ByteWriter w;
  w.put<std::uint32_t>(static_cast<std::uint32_t>(values.size() / dim));
  w.put<std::uint32_t>(dim);
  w.put_array(values);
  write_file(path, w.bytes());
}

inline VectorFile read_fbin(const std::string& path) {
  const auto bytes = read_file(path);
  ByteReader r(bytes);
  VectorFile f;
  f.n = r.get<std::uint32_t>();
  f.dim = r.get<std::uint32_t>();
  f.values.resize(static_cast<std::size_t>(f.n) * f.dim);
  r.get_array<float>(f.values);
  return f;
}

inline Family read_abin_family(const std::string& path) {
  const auto bytes = read_file(path);
  ByteReader r(bytes);
  r.get<std::uint32_t>();
  const auto tag = r.get<std::uint8_t>();
  require(tag <= static_cast<std::uint8_t>(Family::boolean), ErrorCode::tag_mismatch,
          "unknown family tag");
  return static_cast<Family>(tag);
}

template <AttributeSpace Space>
void write_abin(const std::string& path, std::span<const typename Space::attribute_type> attrs) {
  ByteWriter w;
  w.put<std::uint32_t>(static_cast<std::uint32_t>(attrs.size()));
  w.put<std::uint8_t>(static_cast<std::uint8_t>(Space::family));
  write_attributes<Space>(w, attrs);
  write_file(path, w.bytes());
}

template <AttributeSpace Space>
std::vector<typename Space::attribute_type> read_abin(const std::string& path) {
  const auto bytes = read_file(path);
  ByteReader r(bytes);
  const auto n = r.get<std::uint32_t>();
  const auto tag = r.get<std::uint8_t>();
  if (tag != static_cast<std::uint8_t>(Space::family)) {
    fail(ErrorCode::tag_mismatch, "attribute file holds a different family");
  }
  return read_attributes<Space>(r, n);
}

template <AttributeSpace Space>
void write_qbin(const std::string& path, std::span<const typename Space::filter_type> filters) {
  ByteWriter w;
  w.put<std::uint32_t>(static_cast<std::uint32_t>(filters.size()));
  w.put<std::uint8_t>(static_cast<std::uint8_t>(Space::family));
  write_filters<Space>(w, filters);
  write_file(path, w.bytes());
}

template <AttributeSpace Space>
std::vector<typename Space::filter_type> read_qbin(const std::string& path) {
  const auto bytes = read_file(path);
  ByteReader r(bytes);
  const auto n = r.get<std::uint32_t>();
  const auto tag = r.get<std::uint8_t>();
  if (tag != static_cast<std::uint8_t>(Space::family)) {
    fail(ErrorCode::tag_mismatch, "filter file holds a different family");
  }
  return read_filters<Space>(r, n);
}

/// Rows shorter than k are padded with kGtPadding.
inline void write_gt(const std::string& path, const std::vector<std::vector<std::uint32_t>>& ids,
                     std::uint32_t k) {
  ByteWriter w;
  w.put<std::uint32_t>(static_cast<std::uint32_t>(ids.size()));
  w.put<std::uint32_t>(k);
  for (const auto& row : ids) {
    require(row.size() <= k, ErrorCode::invalid_argument, "ground-truth row longer than k");
    for (std::uint32_t j = 0; j < k; ++j) w.put<std::uint32_t>(j < row.size() ? row[j] : kGtPadding);
  }
  write_file(path, w.bytes());
}

struct GroundTruth {
  std::uint32_t k = 0;
  std::vector<std::vector<std::uint32_t>> ids;  // padding stripped
};

inline GroundTruth read_gt(const std::string& path) {
  const auto bytes = read_file(path);
  ByteReader r(bytes);
  GroundTruth gt;
  const auto n = r.get<std::uint32_t>();
  gt.k = r.get<std::uint32_t>();
  gt.ids.resize(n);
  for (auto& row : gt.ids) {
    for (std::uint32_t j = 0; j < gt.k; ++j) {
      const auto id = r.get<std::uint32_t>();
      if (id != kGtPadding) row.push_back(id);
    }
  }
  return gt;
}

}  // namespace jag
