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
#include <span>
#include <string_view>
#include <vector>

#include "jag/error.hpp"

namespace jag {

// Fixed-width bit vector. Bit i lives in word i / 64 at position i % 64; bits
// past width() are always zero so word-wise popcounts need no masking.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t width) : width_(width), words_((width + 63) / 64, 0) {}

  static BitVector from_string(std::string_view bits) {
    // Leftmost character is bit 0.
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      require(bits[i] == '0' || bits[i] == '1', ErrorCode::invalid_argument,
              "bit string may only contain '0' and '1'");
      v.set(i, bits[i] == '1');
    }
    return v;
  }

  std::size_t width() const noexcept { return width_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }

  void set(std::size_t i, bool value = true) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  template <class Fn>
  void for_each_set_bit(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      for (std::uint64_t bits = words_[w]; bits != 0; bits &= bits - 1) {
        fn(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      }
    }
  }

  // LSB-first byte packing used by the on-disk formats.
  std::size_t byte_size() const noexcept { return (width_ + 7) / 8; }

  void to_bytes(std::span<std::uint8_t> out) const noexcept {
    for (std::size_t b = 0; b < byte_size(); ++b) {
      out[b] = static_cast<std::uint8_t>(words_[b / 8] >> (8 * (b % 8)));
    }
  }

  static BitVector from_bytes(std::size_t width, std::span<const std::uint8_t> in) {
    BitVector v(width);
    for (std::size_t b = 0; b < v.byte_size(); ++b) {
      v.words_[b / 8] |= std::uint64_t{in[b]} << (8 * (b % 8));
    }
    if (width % 64 != 0 && !v.words_.empty()) {
      v.words_.back() &= (std::uint64_t{1} << (width % 64)) - 1;
    }
    return v;
  }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

/// |a XOR b|
inline std::size_t xor_count(const BitVector& a, const BitVector& b) noexcept {
  auto wa = a.words();
  auto wb = b.words();
  std::size_t n = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) n += std::popcount(wa[i] ^ wb[i]);
  return n;
}

/// |required AND NOT bits|, the number of required positions missing from bits.
inline std::size_t missing_count(const BitVector& required, const BitVector& bits) noexcept {
  auto wr = required.words();
  auto wb = bits.words();
  std::size_t n = 0;
  for (std::size_t i = 0; i < wr.size(); ++i) n += std::popcount(wr[i] & ~wb[i]);
  return n;
}

}  // namespace jag
