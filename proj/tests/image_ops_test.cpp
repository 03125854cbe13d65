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

#include "cbse/image_ops.hpp"

#include "gtest/gtest.h"
#include "test_util.hpp"

namespace cbse {
namespace {

TEST(ReflectIndex, HalfSampleSymmetric) {
  EXPECT_EQ(ReflectIndex(-1, 5), 0);
  EXPECT_EQ(ReflectIndex(-2, 5), 1);
  EXPECT_EQ(ReflectIndex(5, 5), 4);
  EXPECT_EQ(ReflectIndex(6, 5), 3);
  EXPECT_EQ(ReflectIndex(10, 5), 0);
  EXPECT_EQ(ReflectIndex(-11, 5), 0);
  EXPECT_EQ(ReflectIndex(7, 1), 0);
}

TEST(BoxMean, MatchesDirectSum) {
  const PlaneD in = testing::RandomPlane(13, 9, 5);
  const int r = 3;
  const PlaneD fast = BoxMean(in, r);
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      double s = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          s += in(ReflectIndex(x + dx, in.width()), ReflectIndex(y + dy, in.height()));
        }
      }
      EXPECT_NEAR(fast(x, y), s / 49.0, 1e-9);
    }
  }
}

TEST(DownsampleBox, AveragesBlocks) {
  PlaneD in(4, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) in(x, y) = x + 10 * y;
  const PlaneD out = DownsampleBox(in, 2);
  ASSERT_EQ(out.width(), 2);
  ASSERT_EQ(out.height(), 2);
  EXPECT_DOUBLE_EQ(out(0, 0), 5.5);
  EXPECT_DOUBLE_EQ(out(1, 1), 27.5);
}

TEST(ResizeBilinear, PreservesConstants) {
  const PlaneD in(5, 3, 7.25);
  const PlaneD out = ResizeBilinear(in, 17, 11);
  for (double v : out.data()) EXPECT_DOUBLE_EQ(v, 7.25);
}

}  // namespace
}  // namespace cbse
