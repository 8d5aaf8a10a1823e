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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "jag/attributes.hpp"
#include "jag/error.hpp"

namespace jag {

static_assert(std::endian::native == std::endian::little,
              "on-disk formats are little-endian and read by memcpy");

class ByteWriter {
 public:
  template <class T>
    requires std::is_arithmetic_v<T>
  void put(T value) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
    bytes_.insert(bytes_.end(), p, p + sizeof(T));
  }

  template <class T>
    requires std::is_arithmetic_v<T>
  void put_array(std::span<const T> values) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(values.data());
    bytes_.insert(bytes_.end(), p, p + values.size_bytes());
  }

  void put_bytes(std::span<const std::uint8_t> data) {
    bytes_.insert(bytes_.end(), data.begin(), data.end());
  }

  std::vector<std::uint8_t>& bytes() noexcept { return bytes_; }
  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  template <class T>
    requires std::is_arithmetic_v<T>
  T get() {
    T value;
    std::memcpy(&value, take(sizeof(T)).data(), sizeof(T));
    return value;
  }

  template <class T>
    requires std::is_arithmetic_v<T>
  void get_array(std::span<T> out) {
    if (out.empty()) return;
    std::memcpy(out.data(), take(out.size_bytes()).data(), out.size_bytes());
  }

  std::span<const std::uint8_t> take(std::size_t n) {
    if (n > data_.size() - offset_) fail(ErrorCode::truncated_file, "unexpected end of data");
    auto out = data_.subspan(offset_, n);
    offset_ += n;
    return out;
  }

  std::size_t offset() const noexcept { return offset_; }
  std::size_t remaining() const noexcept { return data_.size() - offset_; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t offset_ = 0;
};

inline std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::io_error, "read failed for " + path);
  return bytes;
}

inline void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io_error, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::io_error, "write failed for " + path);
}

// ---------------------------------------------------------------------------
// Attribute and filter payloads shared by the index and dataset formats.
//
//   label    n x u32
//   scalar   n x f64
//   bitset   u32 L, then n x ceil(L/8) bytes (bit i -> byte i/8, bit i%8)
//   boolean  u32 L, then n x ceil(L/8) bytes, same bit order

template <AttributeSpace Space>
void write_attributes(ByteWriter& w, std::span<const typename Space::attribute_type> attrs) {
  if constexpr (Space::family == Family::label) {
    for (const auto& a : attrs) w.put<std::uint32_t>(a.id);
  } else if constexpr (Space::family == Family::scalar) {
    for (const auto& a : attrs) w.put<double>(a.value);
  } else if constexpr (Space::family == Family::bitset) {
    const auto width = attrs.empty() ? 0u : static_cast<std::uint32_t>(attrs.front().width());
    w.put<std::uint32_t>(width);
    std::vector<std::uint8_t> buf((width + 7) / 8);
    for (const auto& a : attrs) {
      a.to_bytes(buf);
      w.put_bytes(buf);
    }
  } else {
    const auto width = attrs.empty() ? 0u : static_cast<std::uint32_t>(attrs.front().variables());
    w.put<std::uint32_t>(width);
    const std::size_t nbytes = (width + 7) / 8;
    for (const auto& a : attrs) {
      for (std::size_t b = 0; b < nbytes; ++b) w.put<std::uint8_t>(static_cast<std::uint8_t>(a.bits() >> (8 * b)));
    }
  }
}

template <AttributeSpace Space>
std::vector<typename Space::attribute_type> read_attributes(ByteReader& r, std::size_t n) {
  std::vector<typename Space::attribute_type> attrs;
  attrs.reserve(n);
  if constexpr (Space::family == Family::label) {
    for (std::size_t i = 0; i < n; ++i) attrs.push_back(Label{r.get<std::uint32_t>()});
  } else if constexpr (Space::family == Family::scalar) {
    for (std::size_t i = 0; i < n; ++i) attrs.push_back(Scalar{r.get<double>()});
  } else if constexpr (Space::family == Family::bitset) {
    const auto width = r.get<std::uint32_t>();
    for (std::size_t i = 0; i < n; ++i) attrs.push_back(BitVector::from_bytes(width, r.take((width + 7) / 8)));
  } else {
    const auto width = r.get<std::uint32_t>();
    require(width <= BoolAssign::kMaxVariables, ErrorCode::invalid_argument,
            "boolean attribute width exceeds 30");
    const std::size_t nbytes = (width + 7) / 8;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t bits = 0;
      auto raw = r.take(nbytes);
      for (std::size_t b = 0; b < nbytes; ++b) bits |= std::uint32_t{raw[b]} << (8 * b);
      attrs.emplace_back(bits, width);
    }
  }
  return attrs;
}

//   equality  n x u32
//   range     n x (f64 lo, f64 hi)
//   subset    u32 L, then n x ceil(L/8) bytes
//   boolean   u32 L (variables), then n x ceil(2^L/8) truth-table bytes

template <AttributeSpace Space>
void write_filters(ByteWriter& w, std::span<const typename Space::filter_type> filters) {
  if constexpr (Space::family == Family::label) {
    for (const auto& f : filters) w.put<std::uint32_t>(f.target);
  } else if constexpr (Space::family == Family::scalar) {
    for (const auto& f : filters) {
      w.put<double>(f.lo());
      w.put<double>(f.hi());
    }
  } else if constexpr (Space::family == Family::bitset) {
    const auto width = filters.empty() ? 0u : static_cast<std::uint32_t>(filters.front().required.width());
    w.put<std::uint32_t>(width);
    std::vector<std::uint8_t> buf((width + 7) / 8);
    for (const auto& f : filters) {
      require(f.required.width() == width, ErrorCode::dimension_mismatch, "filter widths differ");
      f.required.to_bytes(buf);
      w.put_bytes(buf);
    }
  } else {
    const auto vars = filters.empty() ? 0u : filters.front().variables();
    w.put<std::uint32_t>(vars);
    std::vector<std::uint8_t> buf(((std::size_t{1} << vars) + 7) / 8);
    for (const auto& f : filters) {
      require(f.variables() == vars, ErrorCode::dimension_mismatch, "filter widths differ");
      f.truth_table().to_bytes(buf);
      w.put_bytes(buf);
    }
  }
}

template <AttributeSpace Space>
std::vector<typename Space::filter_type> read_filters(ByteReader& r, std::size_t n) {
  std::vector<typename Space::filter_type> filters;
  filters.reserve(n);
  if constexpr (Space::family == Family::label) {
    for (std::size_t i = 0; i < n; ++i) filters.push_back(Equality{r.get<std::uint32_t>()});
  } else if constexpr (Space::family == Family::scalar) {
    for (std::size_t i = 0; i < n; ++i) {
      const double lo = r.get<double>();
      const double hi = r.get<double>();
      filters.emplace_back(lo, hi);
    }
  } else if constexpr (Space::family == Family::bitset) {
    const auto width = r.get<std::uint32_t>();
    for (std::size_t i = 0; i < n; ++i) {
      filters.push_back(Subset{BitVector::from_bytes(width, r.take((width + 7) / 8))});
    }
  } else {
    const auto vars = r.get<std::uint32_t>();
    require(vars <= BoolPredicate::kMaxVariables, ErrorCode::invalid_argument,
            "boolean predicate width exceeds 30");
    const std::size_t entries = std::size_t{1} << vars;
    for (std::size_t i = 0; i < n; ++i) {
      filters.emplace_back(vars, BitVector::from_bytes(entries, r.take((entries + 7) / 8)));
    }
  }
  return filters;
}

}  // namespace jag
