// Copyright 2026 The CBSE Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cbse/cyclopean.hpp"

#include <algorithm>
#include <set>

#include "cbse/error.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

namespace cbse {
namespace {

DisparityMap RandomDisparity(int w, int h, int max_d, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dist(-max_d, max_d);
  DisparityMap d(w, h);
  for (int& v : d.data()) v = dist(rng);
  return d;
}

TEST(ComputeWeights, SymmetricInputsGiveEqualWeights) {
  const PlaneD s = testing::RandomPlane(30, 20, 2, 0.0, 1.0);
  const ViewWeights w = ComputeWeights(s, s, DisparityMap(30, 20, 0));
  for (std::size_t i = 0; i < w.left.size(); ++i) {
    EXPECT_DOUBLE_EQ(w.left.data()[i], 0.5);
    EXPECT_DOUBLE_EQ(w.right.data()[i], 0.5);
  }
}

TEST(ComputeWeights, RmsRatioThreeToOne) {
  const ViewWeights w = ComputeWeights(PlaneD(25, 25, 3e-3), PlaneD(25, 25, 1e-3), DisparityMap(25, 25, 0));
  for (std::size_t i = 0; i < w.left.size(); ++i) {
    EXPECT_NEAR(w.left.data()[i], 0.75, 1e-12);
    EXPECT_NEAR(w.right.data()[i], 0.25, 1e-12);
  }
}

TEST(ComputeWeights, ZeroSaliencyFallsBackToHalf) {
  const ViewWeights w = ComputeWeights(PlaneD(20, 20, 0.0), PlaneD(20, 20, 0.0), DisparityMap(20, 20, 3));
  for (double v : w.left.data()) EXPECT_EQ(v, 0.5);
  for (double v : w.right.data()) EXPECT_EQ(v, 0.5);
}

TEST(ComputeWeights, ComplementaryEverywhere) {
  const PlaneD sl = testing::RandomPlane(64, 40, 5, 0.0, 1e-3);
  const PlaneD sr = testing::RandomPlane(64, 40, 6, 0.0, 1e-3);
  const ViewWeights w = ComputeWeights(sl, sr, RandomDisparity(64, 40, 10, 7));
  for (std::size_t i = 0; i < w.left.size(); ++i) {
    EXPECT_NEAR(w.left.data()[i] + w.right.data()[i], 1.0, 1e-9);
    EXPECT_GE(w.left.data()[i], 0.0);
    EXPECT_LE(w.left.data()[i], 1.0);
  }
}

TEST(BuildCyclopean, FullLeftWeightCopiesLeft) {
  const PlaneD l = testing::RandomPlane(16, 12, 1);
  const PlaneD r = testing::RandomPlane(16, 12, 2);
  const ViewWeights w{PlaneD(16, 12, 1.0), PlaneD(16, 12, 0.0)};
  const PlaneD c = BuildCyclopean(l, r, RandomDisparity(16, 12, 4, 3), w);
  EXPECT_EQ(c.data(), l.data());
}

TEST(BuildCyclopean, IdenticalViewsReproduceLeft) {
  const PlaneD l = testing::RandomPlane(40, 30, 11);
  const PlaneD wl = testing::RandomPlane(40, 30, 12, 0.0, 1.0);
  PlaneD wr(40, 30);
  for (std::size_t i = 0; i < wr.size(); ++i) wr.data()[i] = 1.0 - wl.data()[i];
  const PlaneD c = BuildCyclopean(l, l, DisparityMap(40, 30, 0), {wl, wr});
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(c.data()[i], l.data()[i], 1e-12);
}

TEST(BuildCyclopean, EqualWeightsAverage) {
  const PlaneD c = BuildCyclopean(PlaneD(8, 8, 100.0), PlaneD(8, 8, 200.0), DisparityMap(8, 8, 0),
                                  {PlaneD(8, 8, 0.5), PlaneD(8, 8, 0.5)});
  for (double v : c.data()) EXPECT_EQ(v, 150.0);
}

TEST(BuildCyclopean, ConvexCombination) {
  const int w = 48, h = 32;
  const PlaneD l = testing::RandomPlane(w, h, 21);
  const PlaneD r = testing::RandomPlane(w, h, 22);
  const DisparityMap d = RandomDisparity(w, h, 6, 23);
  const ViewWeights wt = ComputeWeights(testing::RandomPlane(w, h, 24, 0.0, 1.0),
                                        testing::RandomPlane(w, h, 25, 0.0, 1.0), d);
  const PlaneD c = BuildCyclopean(l, r, d, wt);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double a = l(x, y);
      const double b = r(std::clamp(x + d(x, y), 0, w - 1), y);
      EXPECT_GE(c(x, y), std::min(a, b) - 1e-12);
      EXPECT_LE(c(x, y), std::max(a, b) + 1e-12);
    }
  }
}

TEST(PartitionPatches, FullHdGives144) {
  const PatchGrid g = PartitionPatches(1920, 1080);
  EXPECT_EQ(g.cols, 16);
  EXPECT_EQ(g.rows, 9);
  EXPECT_EQ(g.patch_count(), 144);
}

TEST(PartitionPatches, SmallFrames) {
  const PatchGrid one = PartitionPatches(120, 120);
  ASSERT_EQ(one.patch_count(), 1);
  EXPECT_EQ(one.origins[0].x, 0);
  EXPECT_EQ(one.origins[0].y, 0);
  EXPECT_EQ(PartitionPatches(239, 120).patch_count(), 1);
  EXPECT_THROW(PartitionPatches(119, 200), Error);
}

TEST(PartitionPatches, DisjointTiling) {
  const PatchGrid g = PartitionPatches(500, 370, 120, 90);
  std::set<std::pair<int, int>> covered;
  for (const PatchOrigin& o : g.origins) {
    for (int y = o.y; y < o.y + g.block_h; ++y) {
      for (int x = o.x; x < o.x + g.block_w; ++x) {
        ASSERT_LT(x, 500);
        ASSERT_LT(y, 370);
        EXPECT_TRUE(covered.emplace(x, y).second);
      }
    }
  }
  EXPECT_EQ(covered.size(), static_cast<std::size_t>(g.patch_count()) * 120 * 90);
  // Row-major from the top-left corner.
  EXPECT_EQ(g.origins[1].x, 120);
  EXPECT_EQ(g.origins[g.cols].y, 90);
}

}  // namespace
}  // namespace cbse
