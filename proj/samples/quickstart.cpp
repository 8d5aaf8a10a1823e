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

// Builds a small range-filtered index and compares one query against the
// exact answer.

#include <cstdio>

#include "jag/jag.hpp"

int main() {
  const std::size_t n = 5000;
  const std::size_t d = 16;

  auto workload = jag::gen_range_workload(n, 1, /*seed=*/7);
  jag::Dataset<jag::RangeSpace> data(d, jag::gen_vectors(n, d, 7), workload.attributes);

  jag::BuildParams params;
  params.degree = 24;
  params.mode = jag::ThresholdLevels{{1.0, 0.01, 0.0}};
  const auto index = jag::build(data, params);

  const auto q = jag::gen_vectors(1, d, 7, "queries");
  const jag::Range filter(200000, 260000);
  const auto result = jag::query(index, q, filter, jag::SearchParams{10, 64});
  const auto exact = jag::pre_filter_search(index.data(), q, filter, 10);

  std::printf("selectivity %.3f, distance computations %llu (scan: %llu)\n",
              jag::selectivity(index.data(), filter),
              static_cast<unsigned long long>(result.dc_count),
              static_cast<unsigned long long>(exact.dc_count));
  std::printf("recall@10 = %.2f\n", jag::recall_at_k(result.ids, exact.ids, 10));
  return 0;
}
