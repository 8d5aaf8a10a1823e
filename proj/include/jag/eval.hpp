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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "jag/io.hpp"
#include "jag/search.hpp"

namespace jag {

/// |result ∩ truth| / |truth| over the first k entries of each; padding ids
/// in `truth` are ignored and an empty truth set scores 1.
inline double recall_at_k(std::span<const std::uint32_t> result,
                          std::span<const std::uint32_t> truth, std::size_t k) {
  std::vector<std::uint32_t> valid;
  for (std::size_t i = 0; i < truth.size() && valid.size() < k; ++i) {
    if (truth[i] != kGtPadding) valid.push_back(truth[i]);
  }
  if (valid.empty()) return 1.0;
  std::sort(valid.begin(), valid.end());
  std::size_t hits = 0;
  const std::size_t limit = std::min(k, result.size());
  for (std::size_t i = 0; i < limit; ++i) {
    if (std::binary_search(valid.begin(), valid.end(), result[i])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(valid.size());
}

/// Label of the band whose center is nearest in log10 space, e.g. "1e-03".
inline std::string selectivity_band(double selectivity, std::span<const double> centers) {
  require(!centers.empty(), ErrorCode::invalid_argument, "no band centers");
  const double x = std::log10(std::max(selectivity, 1e-12));
  double best = centers.front();
  for (double c : centers) {
    if (std::abs(std::log10(c) - x) < std::abs(std::log10(best) - x)) best = c;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0e", best);
  return buf;
}

struct QueryOutcome {
  std::vector<std::uint32_t> ids;
  std::uint64_t dc_count = 0;
};

/// One search method under evaluation: answers query `q` at beam width `beam`.
struct Algorithm {
  std::string name;
  std::function<QueryOutcome(std::size_t q, std::uint32_t beam, SearchScratch& scratch)> search;
};

struct EvalRow {
  std::string config;
  std::string algorithm;
  std::uint32_t beam = 0;
  double recall = 0.0;
  double qps = 0.0;
  double mean_dc = 0.0;
  double p50_latency = 0.0;
  double p95_latency = 0.0;
  std::string band;  // empty for the all-queries row
  std::size_t queries = 0;
};

inline constexpr std::string_view kEvalCsvHeader =
    "schema,config,algorithm,beam,recall_at_k,qps,mean_dc,p50_latency_s,p95_latency_s,"
    "selectivity_band,queries";
inline constexpr int kEvalCsvSchema = 1;

struct EvalReport {
  std::vector<EvalRow> rows;

  void write_csv(std::ostream& out) const {
    out << kEvalCsvHeader << '\n';
    for (const auto& r : rows) {
      out << kEvalCsvSchema << ',' << r.config << ',' << r.algorithm << ',' << r.beam << ','
          << r.recall << ',' << r.qps << ',' << r.mean_dc << ',' << r.p50_latency << ','
          << r.p95_latency << ',' << r.band << ',' << r.queries << '\n';
    }
  }
};

struct ExperimentConfig {
  std::string config_id = "default";
  std::vector<std::uint32_t> beams{10, 20, 50, 100};
  std::uint32_t k = 10;
  unsigned threads = 1;
  bool warmup = true;
  /// Optional band label per query; when set, per-band rows follow each
  /// all-queries row.
  std::vector<std::string> bands;
};

namespace detail {

struct PassResult {
  std::vector<double> recall;
  std::vector<std::uint64_t> dc;
  std::vector<double> latency;
  double seconds = 0.0;
};

inline PassResult run_pass(const Algorithm& algo, std::uint32_t beam,
                           const std::vector<std::vector<std::uint32_t>>& truth, std::uint32_t k,
                           unsigned threads) {
  const std::size_t n = truth.size();
  PassResult pass;
  pass.recall.resize(n);
  pass.dc.resize(n);
  pass.latency.resize(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    SearchScratch scratch;
    for (std::size_t q = next++; q < n; q = next++) {
      const auto t0 = std::chrono::steady_clock::now();
      auto outcome = algo.search(q, beam, scratch);
      const auto t1 = std::chrono::steady_clock::now();
      pass.latency[q] = std::chrono::duration<double>(t1 - t0).count();
      pass.dc[q] = outcome.dc_count;
      pass.recall[q] = recall_at_k(outcome.ids, truth[q], k);
    }
  };
  const auto start = std::chrono::steady_clock::now();
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  pass.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return pass;
}

inline double percentile(std::vector<double> xs, double p) {
  if (xs.empty()) return 0.0;
  const auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(xs.size()))) ;
  const std::size_t rank = std::clamp<std::size_t>(idx, 1, xs.size()) - 1;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(rank), xs.end());
  return xs[rank];
}

inline EvalRow summarize(const PassResult& pass, const std::vector<std::size_t>& members) {
  EvalRow row;
  row.queries = members.size();
  if (members.empty()) return row;
  std::vector<double> lat;
  double recall = 0.0;
  double dc = 0.0;
  for (auto q : members) {
    recall += pass.recall[q];
    dc += static_cast<double>(pass.dc[q]);
    lat.push_back(pass.latency[q]);
  }
  row.recall = recall / static_cast<double>(members.size());
  row.mean_dc = dc / static_cast<double>(members.size());
  row.p50_latency = percentile(lat, 0.50);
  row.p95_latency = percentile(lat, 0.95);
  return row;
}

}  // namespace detail

/// Runs every algorithm at every beam over all queries. Rows carry recall@k
/// against `truth`, batch QPS (after one untimed warm-up pass), mean distance
/// computations and latency percentiles.
inline EvalReport run_experiment(const std::vector<Algorithm>& algorithms,
                                 const std::vector<std::vector<std::uint32_t>>& truth,
                                 const ExperimentConfig& config) {
  require(config.bands.empty() || config.bands.size() == truth.size(), ErrorCode::invalid_argument,
          "band labels must cover every query");
  std::vector<std::size_t> all(truth.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::map<std::string, std::vector<std::size_t>> by_band;
  for (std::size_t i = 0; i < config.bands.size(); ++i) by_band[config.bands[i]].push_back(i);

  EvalReport report;
  for (const auto& algo : algorithms) {
    for (std::uint32_t beam : config.beams) {
      if (config.warmup) detail::run_pass(algo, beam, truth, config.k, config.threads);
      const auto pass = detail::run_pass(algo, beam, truth, config.k, config.threads);
      auto emit = [&](const std::vector<std::size_t>& members, const std::string& band) {
        EvalRow row = detail::summarize(pass, members);
        row.config = config.config_id;
        row.algorithm = algo.name;
        row.beam = beam;
        row.band = band;
        row.qps = pass.seconds > 0 ? static_cast<double>(truth.size()) / pass.seconds : 0.0;
        report.rows.push_back(std::move(row));
      };
      emit(all, "");
      for (const auto& [band, members] : by_band) emit(members, band);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Ablation grid

struct AblationCell {
  std::string index;
  std::string band;
  double best_recall = 0.0;
  std::uint32_t beam = 0;  // 0 when no beam met the budget
  double mean_dc = 0.0;
  std::size_t queries = 0;
};

struct AblationGrid {
  std::vector<AblationCell> cells;

  const AblationCell& at(const std::string& index, const std::string& band) const {
    for (const auto& c : cells) {
      if (c.index == index && c.band == band) return c;
    }
    fail(ErrorCode::invalid_argument, "no ablation cell for " + index + " / " + band);
  }

  void write_csv(std::ostream& out) const {
    out << "index,band,best_recall,beam,mean_dc,queries\n";
    for (const auto& c : cells) {
      out << c.index << ',' << c.band << ',' << c.best_recall << ',' << c.beam << ',' << c.mean_dc
          << ',' << c.queries << '\n';
    }
  }
};

struct AblationConfig {
  std::vector<std::uint32_t> beams{10, 12, 16, 20, 25, 32, 40, 50, 64, 80, 100, 128, 160, 200,
                                   256, 320, 400, 500, 640, 800, 1000};
  double dc_budget = 5000.0;
  std::uint32_t k = 10;
  unsigned threads = 1;
};

/// For every (index, band): the best mean recall@k over the beam sweep among
/// beams whose mean distance computations on that band stay within budget.
/// `bands` gives each query's band label; `band_order` fixes the row order.
inline AblationGrid run_ablation_grid(const std::vector<Algorithm>& indices,
                                      const std::vector<std::vector<std::uint32_t>>& truth,
                                      const std::vector<std::string>& bands,
                                      const std::vector<std::string>& band_order,
                                      const AblationConfig& config) {
  require(bands.size() == truth.size(), ErrorCode::invalid_argument,
          "band labels must cover every query");
  std::vector<std::vector<std::size_t>> members(band_order.size());
  for (std::size_t q = 0; q < bands.size(); ++q) {
    auto it = std::find(band_order.begin(), band_order.end(), bands[q]);
    require(it != band_order.end(), ErrorCode::invalid_argument, "query band not in band order");
    members[static_cast<std::size_t>(it - band_order.begin())].push_back(q);
  }

  AblationGrid grid;
  for (const auto& algo : indices) {
    std::vector<AblationCell> cells(band_order.size());
    for (std::size_t b = 0; b < band_order.size(); ++b) {
      cells[b].index = algo.name;
      cells[b].band = band_order[b];
      cells[b].queries = members[b].size();
    }
    for (std::uint32_t beam : config.beams) {
      if (beam < config.k) continue;
      const auto pass = detail::run_pass(algo, beam, truth, config.k, config.threads);
      bool any_within = false;
      for (std::size_t b = 0; b < band_order.size(); ++b) {
        if (members[b].empty()) continue;
        const auto row = detail::summarize(pass, members[b]);
        if (row.mean_dc > config.dc_budget) continue;
        any_within = true;
        if (cells[b].beam == 0 || row.recall > cells[b].best_recall) {
          cells[b].best_recall = row.recall;
          cells[b].beam = beam;
          cells[b].mean_dc = row.mean_dc;
        }
      }
      if (!any_within) break;
    }
    grid.cells.insert(grid.cells.end(), cells.begin(), cells.end());
  }
  return grid;
}

}  // namespace jag
