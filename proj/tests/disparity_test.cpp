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

#include "cbse/disparity.hpp"

#include <map>

#include "cbse/error.hpp"
#include "cbse/image_ops.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

namespace cbse {
namespace {

int ModalInterior(const DisparityMap& d, int margin) {
  std::map<int, int> votes;
  for (int y = margin; y < d.height() - margin; ++y)
    for (int x = margin; x < d.width() - margin; ++x) ++votes[d(x, y)];
  int best = 0, count = -1;
  for (const auto& [value, n] : votes) {
    if (n > count) best = value, count = n;
  }
  return best;
}

TEST(ComputeDisparity, SelfMatchIsZero) {
  const PlaneD img = testing::RandomPlane(48, 32, 1);
  const DisparityMap d = ComputeDisparity(img, img, {16, 11});
  for (int v : d.data()) EXPECT_EQ(v, 0);
}

TEST(ComputeDisparity, ConstantPlanesTieBreakToZero) {
  const PlaneD a(40, 30, 90.0);
  const PlaneD b(40, 30, 90.0);
  const DisparityMap d = ComputeDisparity(a, b, {8, 11});
  for (int v : d.data()) EXPECT_EQ(v, 0);
}

TEST(ComputeDisparity, RecoversSyntheticTranslation) {
  const testing::TextureCanvas canvas(140, 60, 17);
  for (int shift : {5, -5, 12}) {
    const int x0 = 20;
    const PlaneD right = ToReal(canvas.Window(x0, 0, 96, 48));
    const PlaneD left = ToReal(canvas.Window(x0 + shift, 0, 96, 48));
    const DisparityMap d = ComputeDisparity(left, right, {16, 11});
    EXPECT_EQ(ModalInterior(d, 20), shift) << "shift " << shift;
    int agree = 0, total = 0;
    for (int y = 8; y < 40; ++y) {
      for (int x = 24; x < 72; ++x) {
        ++total;
        agree += d(x, y) == shift;
      }
    }
    EXPECT_GT(agree, 0.9 * total);
  }
}

TEST(ComputeDisparity, StaysWithinSearchRange) {
  const PlaneD l = testing::RandomPlane(50, 20, 3);
  const PlaneD r = testing::RandomPlane(50, 20, 4);
  const DisparityMap d = ComputeDisparity(l, r, {6, 5});
  for (int v : d.data()) {
    EXPECT_GE(v, -6);
    EXPECT_LE(v, 6);
  }
}

// Exhaustive SSIM search written directly from the definition.
TEST(ComputeDisparity, MatchesBruteForceSearch) {
  const PlaneD l = testing::RandomPlane(24, 14, 8);
  const PlaneD r = testing::RandomPlane(24, 14, 9);
  const int max_d = 4, win = 5, rad = 2;
  const DisparityMap d = ComputeDisparity(l, r, {max_d, win});
  const double c1 = (0.01 * 255) * (0.01 * 255), c2 = (0.03 * 255) * (0.03 * 255);
  auto at = [](const PlaneD& p, int x, int y) {
    return p(ReflectIndex(x, p.width()), ReflectIndex(y, p.height()));
  };
  for (int y = 0; y < l.height(); ++y) {
    for (int x = 0; x < l.width(); ++x) {
      int best = 0;
      double best_score = -1e300;
      for (int k = 0; k <= 2 * max_d; ++k) {
        const int s = (k % 2 ? -1 : 1) * ((k + 1) / 2);
        double ma = 0, mb = 0, aa = 0, bb = 0, ab = 0;
        const double n = win * win;
        for (int dy = -rad; dy <= rad; ++dy) {
          for (int dx = -rad; dx <= rad; ++dx) {
            const double a = at(l, x + dx, y + dy);
            const double b = at(r, x + s + dx, y + dy);
            ma += a, mb += b, aa += a * a, bb += b * b, ab += a * b;
          }
        }
        ma /= n, mb /= n;
        const double va = aa / n - ma * ma, vb = bb / n - mb * mb, cov = ab / n - ma * mb;
        const double ssim = ((2 * ma * mb + c1) * (2 * cov + c2)) /
                            ((ma * ma + mb * mb + c1) * (va + vb + c2));
        if (ssim > best_score + 1e-9) best_score = ssim, best = s;
      }
      EXPECT_EQ(d(x, y), best) << x << "," << y;
    }
  }
}

TEST(ComputeDisparity, RejectsBadOptions) {
  const PlaneD a(20, 20, 1.0);
  EXPECT_THROW(ComputeDisparity(a, a, {4, 4}), Error);
  EXPECT_THROW(ComputeDisparity(a, a, {-1, 5}), Error);
  EXPECT_THROW(ComputeDisparity(a, PlaneD(21, 20), {4, 5}), Error);
}

}  // namespace
}  // namespace cbse
