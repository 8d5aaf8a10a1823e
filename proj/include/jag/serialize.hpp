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

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cstring>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "jag/binary.hpp"
#include "jag/graph.hpp"

namespace jag {

// Index file layout (little-endian):
//
//   "JAG1" | u32 version=1 | u32 n | u32 d | u8 family | u8 mode | u32 R |
//   f32 alpha | u32 |schedule| + f64 values | u64 entry | n*d f32 vectors |
//   attribute payload (see binary.hpp) | per vertex: u32 degree + ids |
//   u32 CRC32 of everything before it
//
// An index without an entry vertex stores entry = 2^64 - 1.

inline constexpr std::array<std::uint8_t, 4> kIndexMagic{'J', 'A', 'G', '1'};
inline constexpr std::uint32_t kIndexVersion = 1;

inline std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in chunks.
  constexpr std::size_t kChunk = 1u << 30;
  for (std::size_t off = 0; off < bytes.size(); off += kChunk) {
    const auto len = static_cast<uInt>(std::min(kChunk, bytes.size() - off));
    crc = ::crc32(crc, bytes.data() + off, len);
  }
  return static_cast<std::uint32_t>(crc);
}

template <AttributeSpace Space>
std::vector<std::uint8_t> serialize(const JagIndex<Space>& index) {
  ByteWriter w;
  w.put_bytes(kIndexMagic);
  w.put<std::uint32_t>(kIndexVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(index.size()));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(index.dim()));
  w.put<std::uint8_t>(static_cast<std::uint8_t>(Space::family));
  w.put<std::uint8_t>(static_cast<std::uint8_t>(index.mode()));
  w.put<std::uint32_t>(index.degree_bound());
  w.put<float>(index.alpha());
  w.put<std::uint32_t>(static_cast<std::uint32_t>(index.schedule().size()));
  w.put_array(index.schedule());
  w.put<std::uint64_t>(index.has_entry() ? index.entry() : ~std::uint64_t{0});
  w.put_array(index.data().raw_vectors());
  write_attributes<Space>(w, index.data().attributes());
  for (std::uint32_t v = 0; v < index.size(); ++v) {
    auto nbrs = index.neighbors(v);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(nbrs.size()));
    w.put_array(nbrs);
  }
  w.put<std::uint32_t>(crc32_of(w.bytes()));
  return std::move(w.bytes());
}

namespace detail {

struct IndexHeader {
  std::uint32_t n = 0;
  std::uint32_t dim = 0;
  Family family = Family::label;
};

// Checks magic, version and checksum; leaves the reader after the family tag.
inline IndexHeader read_index_header(ByteReader& r, std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kIndexMagic.size() + 4) fail(ErrorCode::version_mismatch, "not a JAG index file");
  auto magic = r.take(kIndexMagic.size());
  if (!std::equal(magic.begin(), magic.end(), kIndexMagic.begin())) {
    fail(ErrorCode::version_mismatch, "bad magic bytes; not a JAG1 index");
  }
  const auto version = r.get<std::uint32_t>();
  if (version != kIndexVersion) {
    fail(ErrorCode::version_mismatch, "unsupported index version " + std::to_string(version));
  }
  if (bytes.size() < 4 + 4 + 4 + 4 + 1 + 4) fail(ErrorCode::truncated_file, "index header truncated");
  std::uint32_t stored;
  std::memcpy(&stored, bytes.data() + bytes.size() - 4, 4);
  if (stored != crc32_of(bytes.first(bytes.size() - 4))) {
    fail(ErrorCode::checksum_mismatch, "index checksum does not match contents");
  }
  IndexHeader h;
  h.n = r.get<std::uint32_t>();
  h.dim = r.get<std::uint32_t>();
  const auto tag = r.get<std::uint8_t>();
  if (tag > static_cast<std::uint8_t>(Family::boolean)) fail(ErrorCode::tag_mismatch, "unknown family tag");
  h.family = static_cast<Family>(tag);
  return h;
}

}  // namespace detail

/// Family tag stored in an index image.
inline Family peek_index_family(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  return detail::read_index_header(r, bytes).family;
}

template <AttributeSpace Space>
JagIndex<Space> deserialize(std::span<const std::uint8_t> bytes, Space space = Space{}) {
  ByteReader r(bytes);
  const auto header = detail::read_index_header(r, bytes);
  if (header.family != Space::family) {
    fail(ErrorCode::tag_mismatch, std::string("index holds ") + std::string(to_string(header.family)) +
                                      " attributes, expected " + std::string(to_string(Space::family)));
  }
  const auto mode_tag = r.get<std::uint8_t>();
  if (mode_tag > static_cast<std::uint8_t>(BuildMode::weight)) fail(ErrorCode::tag_mismatch, "unknown mode tag");
  const auto degree = r.get<std::uint32_t>();
  const auto alpha = r.get<float>();
  std::vector<double> schedule(r.get<std::uint32_t>());
  r.get_array<double>(schedule);
  const auto entry = r.get<std::uint64_t>();
  require(header.dim > 0, ErrorCode::invalid_argument, "index dimension is zero");
  std::vector<float> vectors(static_cast<std::size_t>(header.n) * header.dim);
  r.get_array<float>(vectors);
  auto attrs = read_attributes<Space>(r, header.n);

  JagIndex<Space> index(Dataset<Space>(header.dim, std::move(vectors), std::move(attrs)),
                        std::move(space), degree, alpha, static_cast<BuildMode>(mode_tag),
                        std::move(schedule));
  std::vector<std::uint32_t> row;
  for (std::uint32_t v = 0; v < header.n; ++v) {
    const auto deg = r.get<std::uint32_t>();
    require(deg <= degree, ErrorCode::invalid_argument, "stored vertex exceeds degree bound");
    row.resize(deg);
    r.get_array<std::uint32_t>(row);
    for (auto u : row) require(u < header.n, ErrorCode::invalid_argument, "stored edge out of range");
    index.set_neighbors(v, row);
  }
  if (entry != ~std::uint64_t{0}) {
    require(entry < header.n, ErrorCode::invalid_argument, "stored entry out of range");
    index.set_entry(static_cast<std::uint32_t>(entry));
  }
  if (r.remaining() != 4) fail(ErrorCode::invalid_argument, "trailing bytes after adjacency");
  return index;
}

template <AttributeSpace Space>
void save(const JagIndex<Space>& index, const std::string& path) {
  write_file(path, serialize(index));
}

template <AttributeSpace Space>
JagIndex<Space> load(const std::string& path, Space space = Space{}) {
  const auto bytes = read_file(path);
  return deserialize<Space>(bytes, std::move(space));
}

using AnyIndex = std::variant<JagIndex<LabelSpace>, JagIndex<RangeSpace>, JagIndex<SubsetSpace>,
                              JagIndex<BooleanSpace>>;

/// Loads an index of whichever family the file holds.
inline AnyIndex load_any(const std::string& path) {
  const auto bytes = read_file(path);
  return dispatch_family(peek_index_family(bytes), [&](auto space) -> AnyIndex {
    return deserialize<decltype(space)>(bytes);
  });
}

}  // namespace jag
