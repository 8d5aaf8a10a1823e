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

#include <gtest/gtest.h>

#include <sstream>

#include "test_support.hpp"

namespace {

using namespace jag;

TEST(Recall, Examples) {
  const std::vector<std::uint32_t> truth{1, 2, 3, 4};
  EXPECT_EQ(recall_at_k(std::vector<std::uint32_t>{1, 2, 3, 4}, truth, 4), 1.0);
  EXPECT_EQ(recall_at_k(std::vector<std::uint32_t>{4, 9, 1, 8}, truth, 4), 0.5);
  EXPECT_EQ(recall_at_k(std::vector<std::uint32_t>{}, truth, 4), 0.0);
  EXPECT_EQ(recall_at_k(std::vector<std::uint32_t>{5}, std::vector<std::uint32_t>{}, 4), 1.0);
  // Fewer than k true matches: denominator is the truth size.
  EXPECT_EQ(recall_at_k(std::vector<std::uint32_t>{7, 1}, std::vector<std::uint32_t>{7}, 10), 1.0);
  // Padding entries are ignored.
  EXPECT_EQ(recall_at_k(std::vector<std::uint32_t>{3},
                        std::vector<std::uint32_t>{3, kGtPadding, kGtPadding}, 3),
            1.0);
}

TEST(Bands, NearestInLogSpace) {
  const std::vector<double> centers{1, 1e-1, 1e-2, 1e-3};
  EXPECT_EQ(selectivity_band(0.9, centers), "1e+00");
  EXPECT_EQ(selectivity_band(0.02, centers), "1e-02");
  EXPECT_EQ(selectivity_band(0.0, centers), "1e-03");
}

std::vector<Algorithm> toy_algorithms() {
  Algorithm exact{"exact", [](std::size_t q, std::uint32_t, SearchScratch&) {
                    return QueryOutcome{{static_cast<std::uint32_t>(q)}, 10};
                  }};
  Algorithm sloppy{"sloppy", [](std::size_t q, std::uint32_t beam, SearchScratch&) {
                     QueryOutcome o;
                     if (beam >= 20 || q % 2 == 0) o.ids.push_back(static_cast<std::uint32_t>(q));
                     o.dc_count = beam * 100;
                     return o;
                   }};
  return {exact, sloppy};
}

TEST(Experiment, RowPerAlgorithmAndBeam) {
  const std::vector<std::vector<std::uint32_t>> truth{{0}, {1}, {2}, {3}};
  ExperimentConfig cfg;
  cfg.beams = {10, 20, 40};
  cfg.k = 1;
  const auto report = run_experiment(toy_algorithms(), truth, cfg);
  ASSERT_EQ(report.rows.size(), 6u);
  EXPECT_EQ(report.rows[0].recall, 1.0);
  EXPECT_EQ(report.rows[3].algorithm, "sloppy");
  EXPECT_EQ(report.rows[3].recall, 0.5);
  EXPECT_EQ(report.rows[4].recall, 1.0);
  EXPECT_EQ(report.rows[5].mean_dc, 4000.0);
  std::ostringstream csv;
  report.write_csv(csv);
  std::string line;
  std::istringstream in(csv.str());
  std::getline(in, line);
  EXPECT_EQ(line, kEvalCsvHeader);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
}

TEST(Experiment, PerBandRows) {
  const std::vector<std::vector<std::uint32_t>> truth{{0}, {1}, {2}, {3}};
  ExperimentConfig cfg;
  cfg.beams = {10};
  cfg.k = 1;
  cfg.threads = 2;
  cfg.bands = {"a", "b", "a", "b"};
  const auto report = run_experiment(toy_algorithms(), truth, cfg);
  ASSERT_EQ(report.rows.size(), 6u);
  EXPECT_EQ(report.rows[4].band, "a");
  EXPECT_EQ(report.rows[4].recall, 1.0);
  EXPECT_EQ(report.rows[5].band, "b");
  EXPECT_EQ(report.rows[5].recall, 0.0);
}

TEST(Ablation, BestRecallWithinBudget) {
  const std::vector<std::vector<std::uint32_t>> truth{{0}, {1}, {2}, {3}};
  AblationConfig cfg;
  cfg.beams = {10, 20, 40};
  cfg.k = 1;
  cfg.dc_budget = 2500;
  const auto grid = run_ablation_grid(toy_algorithms(), truth, {"a", "b", "a", "b"}, {"a", "b"}, cfg);
  ASSERT_EQ(grid.cells.size(), 4u);
  EXPECT_EQ(grid.at("sloppy", "b").best_recall, 1.0);
  EXPECT_EQ(grid.at("sloppy", "b").beam, 20u);
  EXPECT_EQ(grid.at("sloppy", "a").beam, 10u);
  EXPECT_EQ(grid.at("exact", "a").best_recall, 1.0);
  cfg.dc_budget = 1500;
  const auto tight = run_ablation_grid(toy_algorithms(), truth, {"a", "b", "a", "b"}, {"a", "b"}, cfg);
  EXPECT_EQ(tight.at("sloppy", "b").best_recall, 0.0);
  EXPECT_THROW(tight.at("missing", "a"), Error);
}

}  // namespace
