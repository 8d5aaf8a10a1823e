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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "jag/graph.hpp"
#include "jag/random.hpp"
#include "jag/search.hpp"

namespace jag {

/// Quantile levels of the per-point attribute-distance distribution, listed
/// from loosest to strictest (1.0 = sample maximum, 0.0 = threshold zero).
struct ThresholdLevels {
  std::vector<double> levels{1.0, 0.01, 0.0};
};

/// Weight multipliers, ascending. Weights are multiplier * scale, where the
/// scale is sigma(vector distance) / sigma(attribute distance) over a sample
/// unless given explicitly.
struct WeightMultipliers {
  std::vector<double> multipliers{0.0, 1.0, 10.0};
  std::optional<double> scale;
};

inline const std::vector<double> kPaperQuantileLevels{1.0, 0.10, 0.01, 0.001, 0.0};
inline const std::vector<double> kPaperWeightMultipliers{0, 1, 2, 5, 10, 100, 1000};

struct BuildParams {
  std::uint32_t build_beam = 64;  // l_b
  std::uint32_t degree = 32;      // R
  float alpha = 1.2f;
  std::variant<ThresholdLevels, WeightMultipliers> mode = ThresholdLevels{};
  std::uint32_t threshold_sample_size = 500;
  double early_exit_fraction = 0.9;
  std::uint64_t seed = 0;
  unsigned threads = 1;  // 1 builds deterministically in id order

  void validate() const {
    require(build_beam > 0, ErrorCode::invalid_argument, "build beam must be positive");
    require(degree > 0, ErrorCode::invalid_argument, "degree bound must be positive");
    require(alpha > 1.0f, ErrorCode::invalid_argument, "alpha must exceed 1");
    require(threshold_sample_size > 0, ErrorCode::invalid_argument,
            "threshold sample size must be positive");
    require(early_exit_fraction > 0.0 && early_exit_fraction <= 1.0, ErrorCode::invalid_argument,
            "early exit fraction must lie in (0, 1]");
    require(threads > 0, ErrorCode::invalid_argument, "thread count must be positive");
    if (const auto* t = std::get_if<ThresholdLevels>(&mode)) {
      require(!t->levels.empty(), ErrorCode::invalid_argument, "threshold level list is empty");
      for (std::size_t i = 0; i < t->levels.size(); ++i) {
        require(t->levels[i] >= 0.0 && t->levels[i] <= 1.0, ErrorCode::invalid_argument,
                "threshold levels must lie in [0, 1]");
        require(i == 0 || t->levels[i] < t->levels[i - 1], ErrorCode::invalid_argument,
                "threshold levels must be distinct and descending");
      }
    } else {
      const auto& w = std::get<WeightMultipliers>(mode);
      require(!w.multipliers.empty(), ErrorCode::invalid_argument, "weight list is empty");
      for (std::size_t i = 0; i < w.multipliers.size(); ++i) {
        require(w.multipliers[i] >= 0.0 && std::isfinite(w.multipliers[i]),
                ErrorCode::invalid_argument, "weight multipliers must be finite and non-negative");
        require(i == 0 || w.multipliers[i] > w.multipliers[i - 1], ErrorCode::invalid_argument,
                "weight multipliers must be distinct and ascending");
      }
      if (w.scale) {
        require(*w.scale >= 0.0 && std::isfinite(*w.scale), ErrorCode::invalid_argument,
                "weight scale must be finite and non-negative");
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Threshold and weight derivation

/// Nearest-rank quantiles of `values` at each level. Level 0 is exactly 0 and
/// level 1 is the maximum; an empty sample yields 0 for every level.
inline std::vector<double> nearest_rank_quantiles(std::vector<double> values,
                                                  std::span<const double> levels) {
  std::vector<double> out(levels.size(), 0.0);
  if (values.empty()) return out;
  const std::size_t m = values.size();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double level = levels[i];
    if (level <= 0.0) continue;
    if (level >= 1.0) {
      out[i] = *std::max_element(values.begin(), values.end());
      continue;
    }
    auto rank = static_cast<std::size_t>(std::ceil(level * static_cast<double>(m) - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, m);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                     values.end());
    out[i] = values[rank - 1];
  }
  return out;
}

/// Per-point thresholds: quantiles of dist_A(p, v) over the sampled points v.
template <AttributeSpace Space>
std::vector<double> derive_thresholds(const Space& space, const Dataset<Space>& data,
                                      const typename Space::attribute_type& p,
                                      std::span<const std::uint32_t> sample,
                                      std::span<const double> levels) {
  std::vector<double> distances;
  distances.reserve(sample.size());
  for (auto v : sample) distances.push_back(space.attribute_distance(p, data.attribute(v)));
  return nearest_rank_quantiles(std::move(distances), levels);
}

/// h = sigma / sigma_A, population standard deviations of the squared vector
/// distance and the attribute distance from sample[0] to every other sample.
template <AttributeSpace Space>
double weight_scale(const Space& space, const Dataset<Space>& data,
                    std::span<const std::uint32_t> sample) {
  require(sample.size() >= 2, ErrorCode::invalid_argument, "weight sample needs at least 2 points");
  const std::uint32_t anchor = sample.front();
  auto population_sd = [](const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size()));
  };
  std::vector<double> vec_d;
  std::vector<double> attr_d;
  for (std::size_t i = 1; i < sample.size(); ++i) {
    vec_d.push_back(sq_l2(data.vector(anchor), data.vector(sample[i])));
    attr_d.push_back(space.attribute_distance(data.attribute(anchor), data.attribute(sample[i])));
  }
  const double sigma_attr = population_sd(attr_d);
  if (!(sigma_attr > 0.0)) {
    fail(ErrorCode::degenerate_attribute_sample, "attribute distances have zero spread");
  }
  return population_sd(vec_d) / sigma_attr;
}

template <AttributeSpace Space>
std::vector<double> derive_weights(const Space& space, const Dataset<Space>& data,
                                   std::span<const std::uint32_t> sample,
                                   std::span<const double> multipliers) {
  const double h = weight_scale(space, data, sample);
  std::vector<double> weights;
  for (double m : multipliers) weights.push_back(m * h);
  return weights;
}

/// Global weight list for a weight-mode build; falls back to {0} when the
/// attribute sample is degenerate or too small.
template <AttributeSpace Space>
std::vector<double> resolve_weights(const Space& space, const Dataset<Space>& data,
                                    const BuildParams& params) {
  const auto& w = std::get<WeightMultipliers>(params.mode);
  std::vector<double> weights;
  if (w.scale) {
    for (double m : w.multipliers) weights.push_back(m * *w.scale);
  } else {
    if (data.size() < 2) return {0.0};
    auto rng = make_rng(params.seed, "weight-sample");
    const auto n = static_cast<std::uint32_t>(data.size());
    const auto count = std::min<std::uint32_t>(n, params.threshold_sample_size + 1);
    auto sample = sample_without_replacement(rng, n, count);
    try {
      weights = derive_weights(space, data, sample, w.multipliers);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::degenerate_attribute_sample) throw;
      return {0.0};
    }
  }
  weights.erase(std::unique(weights.begin(), weights.end()), weights.end());
  return weights;
}

// ---------------------------------------------------------------------------
// Pruning

/// Per-threshold bucket contents, for inspection in tests and tools.
struct PruneTrace {
  struct Entry {
    std::uint32_t id;
    bool fresh;  // false when carried over from an earlier bucket
  };
  std::vector<std::vector<Entry>> buckets;
};

namespace detail {

inline UnifiedDistance schedule_key(BuildMode mode, double value, double attr, double vec) noexcept {
  if (mode == BuildMode::threshold) return {std::max(attr - value, 0.0), vec};
  return {value * attr + vec, vec};
}

inline std::size_t bucket_quota(std::uint32_t degree, std::size_t buckets, double fraction) {
  const double raw = fraction * static_cast<double>(degree) / static_cast<double>(buckets);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(raw - 1e-9)));
}

// `base(id)` returns {squared vector distance, attribute distance} from p.
template <class Space, class BaseFn>
std::vector<std::uint32_t> prune(const JagIndex<Space>& index, std::uint32_t p,
                                 std::span<const std::uint32_t> candidates,
                                 std::span<const double> schedule, double early_exit_fraction,
                                 BaseFn&& base, PruneTrace* trace) {
  const std::size_t m = candidates.size();
  if (trace) trace->buckets.assign(schedule.size(), {});
  if (m == 0) return {};

  std::vector<double> vec(m);
  std::vector<double> attr(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto [v, a] = base(candidates[i]);
    vec[i] = v;
    attr[i] = a;
  }

  const auto& data = index.data();
  const std::size_t d = index.dim();
  const double alpha = static_cast<double>(index.alpha());
  const double alpha_sq = alpha * alpha;
  const std::uint32_t degree = index.degree_bound();
  const std::size_t quota = bucket_quota(degree, schedule.size(), early_exit_fraction);

  std::vector<char> selected(m, 0);
  std::vector<std::size_t> result;
  std::vector<Candidate> ranked(m);
  std::vector<std::size_t> bucket;

  for (std::size_t t = 0; t < schedule.size(); ++t) {
    for (std::size_t i = 0; i < m; ++i) {
      ranked[i] = {schedule_key(index.mode(), schedule[t], attr[i], vec[i]),
                   static_cast<std::uint32_t>(i)};
    }
    std::sort(ranked.begin(), ranked.end(), [&](const Candidate& x, const Candidate& y) {
      if (x.distance.primary != y.distance.primary) return x.distance.primary < y.distance.primary;
      if (x.distance.secondary != y.distance.secondary) {
        return x.distance.secondary < y.distance.secondary;
      }
      return candidates[x.id] < candidates[y.id];
    });

    bucket.clear();
    std::size_t fresh = 0;
    for (const auto& r : ranked) {
      const std::size_t i = r.id;
      if (selected[i]) {
        bucket.push_back(i);
        if (trace) trace->buckets[t].push_back({candidates[i], false});
        continue;
      }
      const float* xv = data.vector_data(candidates[i]);
      bool admit = true;
      for (std::size_t b : bucket) {
        const double between = sq_l2_unchecked(data.vector_data(candidates[b]), xv, d);
        if (!(alpha_sq * between > vec[i])) {
          admit = false;
          break;
        }
      }
      if (admit) {
        bucket.push_back(i);
        selected[i] = 1;
        result.push_back(i);
        ++fresh;
        if (trace) trace->buckets[t].push_back({candidates[i], true});
      }
      if (fresh >= quota) break;
    }
  }

  if (result.size() > degree) {
    const double last = schedule.back();
    std::sort(result.begin(), result.end(), [&](std::size_t x, std::size_t y) {
      return Candidate{schedule_key(index.mode(), last, attr[x], vec[x]), candidates[x]} <
             Candidate{schedule_key(index.mode(), last, attr[y], vec[y]), candidates[y]};
    });
    result.resize(degree);
  }

  std::vector<std::uint32_t> ids;
  ids.reserve(result.size());
  for (auto i : result) ids.push_back(candidates[i]);
  (void)p;
  return ids;
}

}  // namespace detail

/// Selects at most R out-neighbors for p from `candidates` (p excluded),
/// filling one bucket per schedule entry as described on IndexBuilder.
template <AttributeSpace Space>
std::vector<std::uint32_t> joint_robust_prune(const JagIndex<Space>& index, std::uint32_t p,
                                              std::span<const std::uint32_t> candidates,
                                              std::span<const double> schedule,
                                              double early_exit_fraction = 0.9,
                                              PruneTrace* trace = nullptr) {
  require(!schedule.empty(), ErrorCode::invalid_argument, "schedule is empty");
  for (auto c : candidates) {
    require(c != p && c < index.size(), ErrorCode::invalid_argument,
            "candidates must be valid ids other than p");
  }
  const auto& data = index.data();
  auto base = [&](std::uint32_t u) {
    return std::pair{sq_l2_unchecked(data.vector_data(p), data.vector_data(u), index.dim()),
                     index.space().attribute_distance(data.attribute(p), data.attribute(u))};
  };
  return detail::prune(index, p, candidates, schedule, early_exit_fraction, base, trace);
}

// ---------------------------------------------------------------------------
// Incremental construction

/// Inserts points into a JagIndex.
///
/// For a point p the builder runs one beam search per schedule entry (capped
/// attribute distance at p's realized threshold, or the weighted distance),
/// pools every visited vertex, and prunes the pool: for each schedule entry the
/// pool is sorted under that entry's comparator and scanned, admitting v when
/// alpha * dist(u, v) > dist(p, v) for every u already in the entry's bucket.
/// Vertices admitted by an earlier bucket join later buckets without the test
/// and without using up quota; each bucket stops after
/// ceil(early_exit_fraction * R / |schedule|) fresh admissions. p then gets
/// back-edges from each chosen neighbor, which is re-pruned when it overflows.
///
/// In threshold mode p's thresholds are the nearest-rank quantiles of its
/// attribute distances to a sample of lower-id points.
template <AttributeSpace Space>
class IndexBuilder {
 public:
  IndexBuilder(JagIndex<Space>& index, BuildParams params)
      : index_(index), params_(std::move(params)) {
    params_.validate();
    require(params_.degree == index.degree_bound(), ErrorCode::invalid_argument,
            "build degree differs from index degree bound");
    threshold_mode_ = index.mode() == BuildMode::threshold;
  }

  /// Thresholds (threshold mode) or weights (weight mode) used for point id.
  std::span<const double> schedule_for(std::uint32_t id) {
    if (!threshold_mode_) return index_.schedule();
    ensure_thresholds(id);
    return {thresholds_.data() + static_cast<std::size_t>(id) * levels(), levels()};
  }

  /// Appends a new point and links it into the graph.
  std::uint32_t insert(VectorView vector, typename Space::attribute_type attribute) {
    const std::uint32_t id = index_.add_point(vector, std::move(attribute));
    insert_existing(id);
    return id;
  }

  /// Links a point already present in the dataset. Points must be linked in
  /// id order for the result to be deterministic.
  void insert_existing(std::uint32_t id) {
    require(id < index_.size(), ErrorCode::invalid_argument, "point id out of range");
    if (!index_.has_entry()) {
      index_.set_entry(id);
      return;
    }
    Worker worker;
    link(worker, id, nullptr);
  }

  /// Links points [first, size) in id order, or concurrently when
  /// params.threads > 1.
  void insert_range(std::uint32_t first) {
    const auto n = static_cast<std::uint32_t>(index_.size());
    if (first >= n) return;
    if (threshold_mode_) {
      for (std::uint32_t id = first; id < n; ++id) ensure_thresholds(id);
    }
    if (!index_.has_entry()) {
      index_.set_entry(first);
      ++first;
    }
    if (params_.threads <= 1) {
      Worker worker;
      for (std::uint32_t id = first; id < n; ++id) link(worker, id, nullptr);
      return;
    }
    std::vector<std::mutex> locks(n);
    std::atomic<std::uint32_t> next{first};
    auto run = [&] {
      Worker worker;
      for (std::uint32_t id = next.fetch_add(1); id < n; id = next.fetch_add(1)) {
        link(worker, id, &locks);
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < params_.threads; ++t) pool.emplace_back(run);
    for (auto& th : pool) th.join();
  }

 private:
  struct Worker {
    SearchScratch search;
    EpochSet cached;
    EpochSet pooled;
    std::vector<double> vec_cache;
    std::vector<double> attr_cache;
    std::vector<std::uint32_t> pool;
    std::vector<std::uint32_t> row;
  };

  std::size_t levels() const {
    return std::get<ThresholdLevels>(params_.mode).levels.size();
  }

  void ensure_thresholds(std::uint32_t id) {
    const std::size_t t = levels();
    if (thresholds_.size() < index_.size() * t) {
      thresholds_.resize(index_.size() * t, 0.0);
      ready_.resize(index_.size(), 0);
    }
    if (ready_[id]) return;
    auto rng = make_rng(params_.seed, "threshold-sample", id);
    const auto sample =
        sample_without_replacement(rng, id, std::min(id, params_.threshold_sample_size));
    const auto values =
        derive_thresholds(index_.space(), index_.data(), index_.data().attribute(id), sample,
                          std::get<ThresholdLevels>(params_.mode).levels);
    std::copy(values.begin(), values.end(), thresholds_.begin() + static_cast<std::ptrdiff_t>(id * t));
    ready_[id] = 1;
  }

  std::span<const double> ready_schedule(std::uint32_t id) const {
    if (!threshold_mode_) return index_.schedule();
    return {thresholds_.data() + static_cast<std::size_t>(id) * levels(), levels()};
  }

  void link(Worker& w, std::uint32_t p, std::vector<std::mutex>* locks) {
    if (p == index_.entry()) return;
    if (threshold_mode_ && !locks) ensure_thresholds(p);
    const auto& data = index_.data();
    const auto& space = index_.space();
    const std::size_t n = index_.size();
    const std::size_t d = index_.dim();
    const float* xp = data.vector_data(p);
    const auto& ap = data.attribute(p);

    if (w.vec_cache.size() < n) {
      w.vec_cache.resize(n);
      w.attr_cache.resize(n);
    }
    w.cached.reset(n);
    auto base = [&](std::uint32_t u) {
      if (w.cached.insert(u)) {
        w.vec_cache[u] = sq_l2_unchecked(xp, data.vector_data(u), d);
        w.attr_cache[u] = space.attribute_distance(ap, data.attribute(u));
      }
      return std::pair{w.vec_cache[u], w.attr_cache[u]};
    };

    const auto own = ready_schedule(p);
    const std::vector<double> schedule(own.begin(), own.end());
    w.pooled.reset(n);
    w.pool.clear();
    for (double value : schedule) {
      auto key = [&](std::uint32_t u) {
        const auto [vec, attr] = base(u);
        return detail::schedule_key(index_.mode(), value, attr, vec);
      };
      detail::beam_search(index_, params_.build_beam, key, w.search);
      for (const auto& c : w.search.visited) {
        if (c.id != p && w.pooled.insert(c.id)) w.pool.push_back(c.id);
      }
    }

    const auto chosen = detail::prune(index_, p, w.pool, schedule, params_.early_exit_fraction,
                                      base, nullptr);
    {
      std::unique_lock<std::mutex> guard;
      if (locks) guard = std::unique_lock((*locks)[p]);
      index_.set_neighbors(p, chosen);
    }

    for (std::uint32_t v : chosen) {
      std::unique_lock<std::mutex> guard;
      if (locks) guard = std::unique_lock((*locks)[v]);
      index_.copy_neighbors(v, w.row);
      if (std::find(w.row.begin(), w.row.end(), p) != w.row.end()) continue;
      w.row.push_back(p);
      if (w.row.size() <= index_.degree_bound()) {
        index_.set_neighbors(v, w.row);
        continue;
      }
      if (threshold_mode_ && !locks) ensure_thresholds(v);
      const float* xv = data.vector_data(v);
      const auto& av = data.attribute(v);
      auto from_v = [&](std::uint32_t u) {
        return std::pair{sq_l2_unchecked(xv, data.vector_data(u), d),
                         space.attribute_distance(av, data.attribute(u))};
      };
      const auto pruned = detail::prune(index_, v, w.row, ready_schedule(v),
                                        params_.early_exit_fraction, from_v, nullptr);
      index_.set_neighbors(v, pruned);
    }
  }

  JagIndex<Space>& index_;
  BuildParams params_;
  bool threshold_mode_ = true;
  std::vector<double> thresholds_;
  std::vector<char> ready_;
};

/// Builds an index over `data`; the first point becomes the entry vertex.
template <AttributeSpace Space>
JagIndex<Space> build(Dataset<Space> data, const BuildParams& params, Space space = Space{}) {
  params.validate();
  require(!data.empty(), ErrorCode::invalid_argument, "cannot build an index over no points");
  BuildMode mode;
  std::vector<double> schedule;
  if (const auto* t = std::get_if<ThresholdLevels>(&params.mode)) {
    mode = BuildMode::threshold;
    schedule = t->levels;
  } else {
    mode = BuildMode::weight;
    schedule = resolve_weights(space, data, params);
  }
  JagIndex<Space> index(std::move(data), std::move(space), params.degree, params.alpha, mode,
                        std::move(schedule));
  IndexBuilder<Space> builder(index, params);
  builder.insert_range(0);
  return index;
}

}  // namespace jag
