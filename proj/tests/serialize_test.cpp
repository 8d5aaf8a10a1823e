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

#include <filesystem>

#include "test_support.hpp"

namespace {

using namespace jag;
using testing_support::random_vectors;

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

TEST(Serialize, SinglePointRoundTrip) {
  const auto index = build(testing_support::range_dataset(1, 3, 1), BuildParams{});
  const auto bytes = serialize(index);
  const auto back = deserialize<RangeSpace>(bytes);
  EXPECT_TRUE(back == index);
  EXPECT_EQ(serialize(back), bytes);
}

TEST(Serialize, EmptyIndexRoundTrip) {
  const JagIndex<RangeSpace> empty(Dataset<RangeSpace>(4, {}, {}), RangeSpace{}, 8, 1.2f,
                                   BuildMode::threshold, {1.0, 0.0});
  const auto back = deserialize<RangeSpace>(serialize(empty));
  EXPECT_FALSE(back.has_entry());
  EXPECT_TRUE(back == empty);
}

template <class Space, class Workload>
void round_trip(const Workload& wl, std::size_t n, BuildParams p) {
  const Dataset<Space> data(6, random_vectors(n, 6, 2), wl.attributes);
  const auto index = build(data, p);
  const auto path = temp_path("jag_serialize_roundtrip.jag");
  save(index, path);
  const auto back = load<Space>(path);
  EXPECT_TRUE(back == index);
  EXPECT_EQ(serialize(back), serialize(index));
  const auto any = load_any(path);
  EXPECT_EQ(any.index(), static_cast<std::size_t>(Space::family));
  std::filesystem::remove(path);
}

TEST(Serialize, BuiltIndexRoundTripsEveryFamily) {
  BuildParams p;
  p.degree = 12;
  p.build_beam = 24;
  round_trip<LabelSpace>(gen_label_workload(1000, 1, 12, 3), 1000, p);
  round_trip<RangeSpace>(gen_range_workload(1000, 1, 3), 1000, p);
  round_trip<SubsetSpace>(gen_subset_workload(500, 1, 3), 500, p);
  p.mode = WeightMultipliers{};
  round_trip<BooleanSpace>(gen_boolean_workload(500, 1, 3), 500, p);
}

TEST(Serialize, CorruptMagicIsVersionMismatch) {
  const auto index = build(testing_support::range_dataset(20, 3, 4), BuildParams{});
  auto bytes = serialize(index);
  bytes[0] = 'X';
  try {
    deserialize<RangeSpace>(bytes);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::version_mismatch);
  }
}

TEST(Serialize, FlippedPayloadByteFailsChecksum) {
  const auto index = build(testing_support::range_dataset(20, 3, 5), BuildParams{});
  auto bytes = serialize(index);
  bytes[bytes.size() / 2] ^= 0x10;
  try {
    deserialize<RangeSpace>(bytes);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::checksum_mismatch);
  }
}

TEST(Serialize, TruncatedAndWrongFamily) {
  const auto index = build(testing_support::range_dataset(20, 3, 6), BuildParams{});
  auto bytes = serialize(index);
  try {
    deserialize<LabelSpace>(bytes);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::tag_mismatch);
  }
  bytes.resize(6);
  EXPECT_THROW(deserialize<RangeSpace>(bytes), Error);
}

TEST(Serialize, LoadedIndexAnswersIdentically) {
  auto wl = gen_range_workload(800, 20, 7);
  const Dataset<RangeSpace> data(6, random_vectors(800, 6, 7), wl.attributes);
  BuildParams p;
  p.degree = 12;
  const auto index = build(data, p);
  const auto back = deserialize<RangeSpace>(serialize(index));
  const auto qv = random_vectors(20, 6, 8);
  for (std::size_t i = 0; i < 20; ++i) {
    const VectorView q(qv.data() + i * 6, 6);
    const auto a = query(index, q, wl.filters[i], SearchParams{10, 30});
    const auto b = query(back, q, wl.filters[i], SearchParams{10, 30});
    EXPECT_EQ(a.ids, b.ids);
    EXPECT_EQ(a.dc_count, b.dc_count);
  }
}

}  // namespace
