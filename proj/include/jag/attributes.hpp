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
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "jag/bits.hpp"
#include "jag/error.hpp"

namespace jag {

// Attribute families. The numeric values are the on-disk tags.
enum class Family : std::uint8_t { label = 0, scalar = 1, bitset = 2, boolean = 3 };

constexpr std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::label: return "label";
    case Family::scalar: return "scalar";
    case Family::bitset: return "bitset";
    case Family::boolean: return "boolean";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Attribute values

struct Label {
  std::uint32_t id = 0;
  friend bool operator==(const Label&, const Label&) = default;
};

struct Scalar {
  double value = 0.0;
  friend bool operator==(const Scalar&, const Scalar&) = default;
};

/// Assignment of up to 30 boolean variables; bit i is variable i.
class BoolAssign {
 public:
  static constexpr unsigned kMaxVariables = 30;

  BoolAssign() = default;
  BoolAssign(std::uint32_t bits, unsigned variables) : bits_(bits), variables_(variables) {
    require(variables <= kMaxVariables, ErrorCode::invalid_argument,
            "boolean assignments support at most 30 variables");
    require(variables == 32 || (bits >> variables) == 0, ErrorCode::invalid_argument,
            "assignment has bits beyond its variable count");
  }

  std::uint32_t bits() const noexcept { return bits_; }
  unsigned variables() const noexcept { return variables_; }

  friend bool operator==(const BoolAssign&, const BoolAssign&) = default;

 private:
  std::uint32_t bits_ = 0;
  unsigned variables_ = 0;
};

// ---------------------------------------------------------------------------
// Filters

struct Equality {
  std::uint32_t target = 0;
  friend bool operator==(const Equality&, const Equality&) = default;
};

/// Closed interval [lo, hi].
class Range {
 public:
  Range() = default;
  Range(double lo, double hi) : lo_(lo), hi_(hi) {
    require(!std::isnan(lo) && !std::isnan(hi) && lo <= hi, ErrorCode::invalid_argument,
            "range filter requires lo <= hi");
  }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

  friend bool operator==(const Range&, const Range&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

/// Matches attributes containing every required bit.
struct Subset {
  BitVector required;
  friend bool operator==(const Subset&, const Subset&) = default;
};

/// Boolean function over L <= 30 variables stored as a 2^L-entry truth table.
///
/// The distance to the nearest satisfying assignment is answered from a table
/// filled by a multi-source breadth-first search over the hypercube when
/// L <= kTabulatedVariables, and by expanding Hamming balls around the queried
/// assignment otherwise. Both are exact.
class BoolPredicate {
 public:
  static constexpr unsigned kMaxVariables = 30;
  static constexpr unsigned kTabulatedVariables = 20;

  BoolPredicate() = default;

  BoolPredicate(unsigned variables, BitVector truth_table)
      : variables_(variables), table_(std::move(truth_table)) {
    require(variables <= kMaxVariables, ErrorCode::invalid_argument,
            "boolean predicates support at most 30 variables");
    require(table_.width() == (std::size_t{1} << variables), ErrorCode::invalid_argument,
            "truth table must have 2^L entries");
    satisfying_ = table_.count();
    require(satisfying_ > 0, ErrorCode::unsatisfiable_filter,
            "predicate has no satisfying assignment");
    if (variables <= kTabulatedVariables) tabulate();
  }

  template <class Fn>
  static BoolPredicate from_function(unsigned variables, Fn&& fn) {
    require(variables <= kMaxVariables, ErrorCode::invalid_argument,
            "boolean predicates support at most 30 variables");
    BitVector table(std::size_t{1} << variables);
    for (std::uint32_t a = 0; a < (std::uint32_t{1} << variables); ++a) {
      if (fn(a)) table.set(a);
    }
    return BoolPredicate(variables, std::move(table));
  }

  unsigned variables() const noexcept { return variables_; }
  const BitVector& truth_table() const noexcept { return table_; }
  std::size_t satisfying_count() const noexcept { return satisfying_; }
  double pass_rate() const noexcept {
    return static_cast<double>(satisfying_) / static_cast<double>(table_.width());
  }

  bool operator()(std::uint32_t assignment) const noexcept { return table_.test(assignment); }

  /// Minimum Hamming distance from `assignment` to any satisfying assignment.
  unsigned distance(std::uint32_t assignment) const noexcept {
    if (distances_) return (*distances_)[assignment];
    return distance_by_radius(assignment);
  }

  unsigned distance_by_radius(std::uint32_t assignment) const noexcept {
    const std::uint64_t limit = std::uint64_t{1} << variables_;
    for (unsigned r = 0; r <= variables_; ++r) {
      // Enumerate every mask of popcount r (Gosper's hack).
      std::uint64_t mask = (std::uint64_t{1} << r) - 1;
      while (mask < limit) {
        if (table_.test(assignment ^ static_cast<std::uint32_t>(mask))) return r;
        if (mask == 0) break;
        const std::uint64_t low = mask & (~mask + 1);
        const std::uint64_t ripple = mask + low;
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
      }
    }
    return variables_;  // unreachable for satisfiable predicates
  }

  friend bool operator==(const BoolPredicate& a, const BoolPredicate& b) {
    return a.variables_ == b.variables_ && a.table_ == b.table_;
  }

 private:
  void tabulate() {
    const std::size_t size = table_.width();
    auto dist = std::make_shared<std::vector<std::uint8_t>>(size, std::uint8_t{0xff});
    std::vector<std::uint32_t> frontier;
    frontier.reserve(satisfying_);
    table_.for_each_set_bit([&](std::size_t a) {
      (*dist)[a] = 0;
      frontier.push_back(static_cast<std::uint32_t>(a));
    });
    std::vector<std::uint32_t> next;
    for (std::uint8_t level = 1; !frontier.empty(); ++level) {
      next.clear();
      for (auto a : frontier) {
        for (unsigned bit = 0; bit < variables_; ++bit) {
          const std::uint32_t b = a ^ (std::uint32_t{1} << bit);
          if ((*dist)[b] == 0xff) {
            (*dist)[b] = level;
            next.push_back(b);
          }
        }
      }
      frontier.swap(next);
    }
    distances_ = std::move(dist);
  }

  unsigned variables_ = 0;
  BitVector table_;
  std::size_t satisfying_ = 0;
  std::shared_ptr<const std::vector<std::uint8_t>> distances_;
};

// ---------------------------------------------------------------------------
// Attribute distance configuration

/// Optional frequency weighting for bitset attributes: distance becomes
/// weight_cap - sum of label_weights over the shared bits.
struct AttrDistanceConfig {
  Family family = Family::label;
  std::optional<std::vector<double>> label_weights;
  double weight_cap = 0.0;
};

/// Per-bit weights log(1/p_i) from label frequencies in `attributes`; the cap
/// is the sum of all weights, the largest overlap any pair can reach.
inline AttrDistanceConfig frequency_weighted_config(std::span<const BitVector> attributes) {
  require(!attributes.empty(), ErrorCode::invalid_argument, "need attributes to count frequencies");
  const std::size_t width = attributes.front().width();
  std::vector<std::size_t> counts(width, 0);
  for (const auto& a : attributes) {
    a.for_each_set_bit([&](std::size_t i) { ++counts[i]; });
  }
  AttrDistanceConfig cfg;
  cfg.family = Family::bitset;
  std::vector<double> weights(width, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < width; ++i) {
    if (counts[i] == 0) continue;
    const double p = static_cast<double>(counts[i]) / static_cast<double>(attributes.size());
    weights[i] = std::log(1.0 / p);
    total += weights[i];
  }
  cfg.label_weights = std::move(weights);
  cfg.weight_cap = total;
  return cfg;
}

// ---------------------------------------------------------------------------
// Attribute spaces. Each bundles an attribute type, its filter type, the
// matching predicate, the filter distance and the attribute distance. The
// index and search templates are parameterized on one of these.

struct LabelSpace {
  static constexpr Family family = Family::label;
  using attribute_type = Label;
  using filter_type = Equality;

  LabelSpace() = default;
  explicit LabelSpace(const AttrDistanceConfig& cfg) {
    require(!cfg.label_weights, ErrorCode::invalid_argument,
            "label weights are only defined for bitset attributes");
  }

  static bool matches(const Label& a, const Equality& f) noexcept { return a.id == f.target; }
  static double filter_distance(const Label& a, const Equality& f) noexcept {
    return a.id == f.target ? 0.0 : 1.0;
  }
  double attribute_distance(const Label& a, const Label& b) const noexcept {
    return a.id == b.id ? 0.0 : 1.0;
  }
};

struct RangeSpace {
  static constexpr Family family = Family::scalar;
  using attribute_type = Scalar;
  using filter_type = Range;

  RangeSpace() = default;
  explicit RangeSpace(const AttrDistanceConfig& cfg) {
    require(!cfg.label_weights, ErrorCode::invalid_argument,
            "label weights are only defined for bitset attributes");
  }

  static bool matches(const Scalar& a, const Range& f) noexcept {
    return f.lo() <= a.value && a.value <= f.hi();
  }
  static double filter_distance(const Scalar& a, const Range& f) noexcept {
    if (a.value < f.lo()) return f.lo() - a.value;
    if (a.value > f.hi()) return a.value - f.hi();
    return 0.0;
  }
  double attribute_distance(const Scalar& a, const Scalar& b) const noexcept {
    return std::abs(a.value - b.value);
  }
};

class SubsetSpace {
 public:
  static constexpr Family family = Family::bitset;
  using attribute_type = BitVector;
  using filter_type = Subset;

  SubsetSpace() = default;
  explicit SubsetSpace(const AttrDistanceConfig& cfg) {
    if (!cfg.label_weights) return;
    double total = 0.0;
    for (double w : *cfg.label_weights) {
      require(w >= 0.0 && std::isfinite(w), ErrorCode::invalid_argument,
              "label weights must be finite and non-negative");
      total += w;
    }
    require(cfg.weight_cap >= total, ErrorCode::invalid_argument,
            "weight cap must be at least the sum of all label weights");
    weights_ = std::make_shared<const std::vector<double>>(*cfg.label_weights);
    cap_ = cfg.weight_cap;
  }

  bool weighted() const noexcept { return weights_ != nullptr; }

  static bool matches(const BitVector& a, const Subset& f) noexcept {
    return missing_count(f.required, a) == 0;
  }
  static double filter_distance(const BitVector& a, const Subset& f) noexcept {
    return static_cast<double>(missing_count(f.required, a));
  }
  double attribute_distance(const BitVector& a, const BitVector& b) const noexcept {
    if (!weights_) return static_cast<double>(xor_count(a, b));
    double shared = 0.0;
    auto wa = a.words();
    auto wb = b.words();
    for (std::size_t w = 0; w < wa.size(); ++w) {
      for (std::uint64_t bits = wa[w] & wb[w]; bits != 0; bits &= bits - 1) {
        const std::size_t i = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        if (i < weights_->size()) shared += (*weights_)[i];
      }
    }
    return cap_ - shared;
  }

 private:
  std::shared_ptr<const std::vector<double>> weights_;
  double cap_ = 0.0;
};

struct BooleanSpace {
  static constexpr Family family = Family::boolean;
  using attribute_type = BoolAssign;
  using filter_type = BoolPredicate;

  BooleanSpace() = default;
  explicit BooleanSpace(const AttrDistanceConfig& cfg) {
    require(!cfg.label_weights, ErrorCode::invalid_argument,
            "label weights are only defined for bitset attributes");
  }

  static bool matches(const BoolAssign& a, const BoolPredicate& f) noexcept { return f(a.bits()); }
  static double filter_distance(const BoolAssign& a, const BoolPredicate& f) noexcept {
    return static_cast<double>(f.distance(a.bits()));
  }
  double attribute_distance(const BoolAssign& a, const BoolAssign& b) const noexcept {
    return static_cast<double>(std::popcount(a.bits() ^ b.bits()));
  }
};

template <class S>
concept AttributeSpace = requires(const S& s, const typename S::attribute_type& a,
                                  const typename S::filter_type& f) {
  { S::family } -> std::convertible_to<Family>;
  { S::matches(a, f) } -> std::convertible_to<bool>;
  { S::filter_distance(a, f) } -> std::convertible_to<double>;
  { s.attribute_distance(a, a) } -> std::convertible_to<double>;
};

/// Width an attribute or filter imposes on its dataset (0 for label/scalar).
inline std::size_t attribute_width(const Label&) noexcept { return 0; }
inline std::size_t attribute_width(const Scalar&) noexcept { return 0; }
inline std::size_t attribute_width(const BitVector& a) noexcept { return a.width(); }
inline std::size_t attribute_width(const BoolAssign& a) noexcept { return a.variables(); }
inline std::size_t filter_width(const Equality&) noexcept { return 0; }
inline std::size_t filter_width(const Range&) noexcept { return 0; }
inline std::size_t filter_width(const Subset& f) noexcept { return f.required.width(); }
inline std::size_t filter_width(const BoolPredicate& f) noexcept { return f.variables(); }

// ---------------------------------------------------------------------------
// Family-erased values. Operations on these dispatch at run time and report
// FilterFamilyMismatch when the two sides come from different families.

using Attribute = std::variant<Label, Scalar, BitVector, BoolAssign>;
using Filter = std::variant<Equality, Range, Subset, BoolPredicate>;

inline Family family_of(const Attribute& a) noexcept { return static_cast<Family>(a.index()); }
inline Family family_of(const Filter& f) noexcept { return static_cast<Family>(f.index()); }

namespace detail {

template <class Space>
const typename Space::attribute_type& attribute_as(const Attribute& a) {
  const auto* value = std::get_if<typename Space::attribute_type>(&a);
  if (value == nullptr) fail(ErrorCode::filter_family_mismatch, "attribute family differs");
  return *value;
}

template <class Space>
const typename Space::filter_type& filter_as(const Filter& f) {
  const auto* value = std::get_if<typename Space::filter_type>(&f);
  if (value == nullptr) fail(ErrorCode::filter_family_mismatch, "filter family differs from attribute");
  return *value;
}

template <class Fn>
decltype(auto) visit_family(Family family, Fn&& fn) {
  switch (family) {
    case Family::label: return fn(LabelSpace{});
    case Family::scalar: return fn(RangeSpace{});
    case Family::bitset: return fn(SubsetSpace{});
    case Family::boolean: return fn(BooleanSpace{});
  }
  fail(ErrorCode::tag_mismatch, "unknown attribute family tag");
}

template <class Space>
void check_widths(const typename Space::attribute_type& a, const typename Space::filter_type& f) {
  require(attribute_width(a) == filter_width(f), ErrorCode::dimension_mismatch,
          "attribute and filter widths differ");
}

}  // namespace detail

/// Calls fn(Space{}) for the attribute space of `family`.
template <class Fn>
decltype(auto) dispatch_family(Family family, Fn&& fn) {
  return detail::visit_family(family, std::forward<Fn>(fn));
}

inline bool matches(const Attribute& a, const Filter& f) {
  return dispatch_family(family_of(a), [&](auto space) {
    using S = decltype(space);
    const auto& attr = detail::attribute_as<S>(a);
    const auto& filter = detail::filter_as<S>(f);
    detail::check_widths<S>(attr, filter);
    return S::matches(attr, filter);
  });
}

inline double filter_distance(const Attribute& a, const Filter& f) {
  return dispatch_family(family_of(a), [&](auto space) {
    using S = decltype(space);
    const auto& attr = detail::attribute_as<S>(a);
    const auto& filter = detail::filter_as<S>(f);
    detail::check_widths<S>(attr, filter);
    return S::filter_distance(attr, filter);
  });
}

inline double attribute_distance(const Attribute& a, const Attribute& b,
                                 const AttrDistanceConfig& cfg = {}) {
  return dispatch_family(family_of(a), [&](auto tag) {
    using S = decltype(tag);
    const S space = cfg.label_weights ? S(cfg) : S{};
    const auto& x = detail::attribute_as<S>(a);
    const auto& y = detail::attribute_as<S>(b);
    require(attribute_width(x) == attribute_width(y), ErrorCode::dimension_mismatch,
            "attribute widths differ");
    return space.attribute_distance(x, y);
  });
}

inline double capped_attribute_distance(const Attribute& a, const Attribute& b, double threshold,
                                        const AttrDistanceConfig& cfg = {}) {
  require(threshold >= 0.0, ErrorCode::invalid_argument, "threshold must be non-negative");
  return std::max(attribute_distance(a, b, cfg) - threshold, 0.0);
}

}  // namespace jag
