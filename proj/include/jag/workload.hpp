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

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "jag/attributes.hpp"
#include "jag/random.hpp"

namespace jag {

// Synthetic filtered workloads. Every generator is a pure function of its
// arguments and seed; each purpose draws from its own stream.

template <class Attr, class Filt>
struct Workload {
  std::vector<Attr> attributes;
  std::vector<Filt> filters;
  /// Selectivity each filter was designed for (the band it was drawn from).
  std::vector<double> designed_selectivity;
};

using LabelWorkload = Workload<Label, Equality>;
using RangeWorkload = Workload<Scalar, Range>;
using SubsetWorkload = Workload<BitVector, Subset>;
using BooleanWorkload = Workload<BoolAssign, BoolPredicate>;

inline constexpr double kRangeMax = 1e6;
inline constexpr std::array<double, 6> kRangeDivisors{1, 10, 100, 1000, 1e4, 1e5};
inline constexpr std::array<unsigned, 9> kSubsetQuerySizes{0, 2, 4, 6, 8, 10, 12, 14, 16};
inline constexpr unsigned kSubsetWidth = 30;
inline constexpr unsigned kBooleanVariables = 15;

/// Pass-rate bands (lo, hi] for boolean predicates.
struct PassBand {
  double lo;
  double hi;
  bool contains(double rate) const noexcept { return rate > lo && rate <= hi; }
};
inline constexpr std::array<PassBand, 4> kBooleanBands{{{1.0 / 16, 1.0},
                                                        {1.0 / 256, 1.0 / 16},
                                                        {1.0 / 4096, 1.0 / 256},
                                                        {0.0, 1.0 / 4096}}};

/// n x d standard-normal coordinates, row-major.
inline std::vector<float> gen_vectors(std::size_t n, std::size_t d, std::uint64_t seed,
                                      std::string_view stream = "vectors") {
  require(n > 0 && d > 0, ErrorCode::invalid_argument, "vector count and dimension must be positive");
  auto rng = make_rng(seed, stream);
  std::vector<float> out(n * d);
  for (auto& x : out) x = static_cast<float>(standard_normal(rng));
  return out;
}

/// Uniform labels in [0, labels); each query asks for one uniform label.
inline LabelWorkload gen_label_workload(std::size_t n, std::size_t n_queries, std::uint32_t labels,
                                        std::uint64_t seed) {
  require(n > 0 && labels > 0, ErrorCode::invalid_argument, "need points and at least one label");
  LabelWorkload w;
  auto attr_rng = make_rng(seed, "label-attributes");
  for (std::size_t i = 0; i < n; ++i) {
    w.attributes.push_back(Label{static_cast<std::uint32_t>(uniform_below(attr_rng, labels))});
  }
  auto query_rng = make_rng(seed, "label-filters");
  for (std::size_t i = 0; i < n_queries; ++i) {
    w.filters.push_back(Equality{static_cast<std::uint32_t>(uniform_below(query_rng, labels))});
    w.designed_selectivity.push_back(1.0 / labels);
  }
  return w;
}

/// Integer attributes uniform in [0, 1e6]. Each query picks a divisor k
/// uniformly from `divisors` and an interval of length 1e6/k placed uniformly.
inline RangeWorkload gen_range_workload(std::size_t n, std::size_t n_queries, std::uint64_t seed,
                                        std::span<const double> divisors = kRangeDivisors) {
  require(n > 0 && !divisors.empty(), ErrorCode::invalid_argument, "need points and divisors");
  RangeWorkload w;
  auto attr_rng = make_rng(seed, "range-attributes");
  const auto span_values = static_cast<std::uint64_t>(kRangeMax) + 1;
  for (std::size_t i = 0; i < n; ++i) {
    w.attributes.push_back(Scalar{static_cast<double>(uniform_below(attr_rng, span_values))});
  }
  auto query_rng = make_rng(seed, "range-filters");
  for (std::size_t i = 0; i < n_queries; ++i) {
    const double k = divisors[uniform_below(query_rng, divisors.size())];
    require(k >= 1.0, ErrorCode::invalid_argument, "range divisors must be at least 1");
    const double length = kRangeMax / k;
    const double lo = uniform01(query_rng) * (kRangeMax - length);
    w.filters.emplace_back(lo, lo + length);
    w.designed_selectivity.push_back(1.0 / k);
  }
  return w;
}

/// 30-bit attributes with independent fair bits. Each query requires k
/// distinct uniformly chosen bits, k drawn uniformly from `sizes`.
inline SubsetWorkload gen_subset_workload(std::size_t n, std::size_t n_queries, std::uint64_t seed,
                                          unsigned width = kSubsetWidth,
                                          std::span<const unsigned> sizes = kSubsetQuerySizes) {
  require(n > 0 && width > 0 && !sizes.empty(), ErrorCode::invalid_argument,
          "need points, a positive width and query sizes");
  SubsetWorkload w;
  auto attr_rng = make_rng(seed, "subset-attributes");
  for (std::size_t i = 0; i < n; ++i) {
    BitVector bits(width);
    for (unsigned b = 0; b < width; ++b) bits.set(b, uniform_below(attr_rng, 2) == 1);
    w.attributes.push_back(std::move(bits));
  }
  auto query_rng = make_rng(seed, "subset-filters");
  for (std::size_t i = 0; i < n_queries; ++i) {
    const unsigned k = sizes[uniform_below(query_rng, sizes.size())];
    require(k <= width, ErrorCode::invalid_argument, "query size exceeds attribute width");
    BitVector required(width);
    for (auto b : sample_without_replacement(query_rng, width, k)) required.set(b);
    w.filters.push_back(Subset{std::move(required)});
    w.designed_selectivity.push_back(std::ldexp(1.0, -static_cast<int>(k)));
  }
  return w;
}

/// Random truth table whose exact pass rate lies in `band`, drawn by
/// rejection with per-entry probability at the band midpoint.
inline BoolPredicate random_predicate_in_band(Rng& rng, unsigned variables, PassBand band) {
  const std::size_t entries = std::size_t{1} << variables;
  const double p = 0.5 * (band.lo + band.hi);
  for (;;) {
    BitVector table(entries);
    std::size_t ones = 0;
    for (std::size_t a = 0; a < entries; ++a) {
      if (uniform01(rng) < p) {
        table.set(a);
        ++ones;
      }
    }
    const double rate = static_cast<double>(ones) / static_cast<double>(entries);
    if (ones > 0 && band.contains(rate)) return BoolPredicate(variables, std::move(table));
  }
}

/// Uniform 15-variable assignments; each query draws one of the four pass-rate
/// bands uniformly, then a random predicate inside it.
inline BooleanWorkload gen_boolean_workload(std::size_t n, std::size_t n_queries, std::uint64_t seed,
                                            unsigned variables = kBooleanVariables) {
  require(n > 0, ErrorCode::invalid_argument, "need points");
  require(variables >= 13 && variables <= 20, ErrorCode::invalid_argument,
          "boolean workloads need 13..20 variables so every band is reachable");
  BooleanWorkload w;
  auto attr_rng = make_rng(seed, "boolean-attributes");
  for (std::size_t i = 0; i < n; ++i) {
    const auto bits = static_cast<std::uint32_t>(uniform_below(attr_rng, std::uint64_t{1} << variables));
    w.attributes.emplace_back(bits, variables);
  }
  auto query_rng = make_rng(seed, "boolean-filters");
  for (std::size_t i = 0; i < n_queries; ++i) {
    const auto& band = kBooleanBands[uniform_below(query_rng, kBooleanBands.size())];
    auto predicate = random_predicate_in_band(query_rng, variables, band);
    w.designed_selectivity.push_back(predicate.pass_rate());
    w.filters.push_back(std::move(predicate));
  }
  return w;
}

}  // namespace jag
