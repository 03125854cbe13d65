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

#include "cbse/nss_features.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "cbse/error.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

namespace cbse {
namespace {

// Zero-mean generalized Gaussian with shape `alpha` and standard deviation
// `sigma`: |x| = s * G^(1/alpha), G ~ Gamma(1/alpha, 1), random sign.
std::vector<double> SampleGgd(double alpha, double sigma, int n, std::uint32_t seed) {
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> gamma(1.0 / alpha, 1.0);
  std::bernoulli_distribution sign(0.5);
  const double s = sigma * std::sqrt(std::tgamma(1.0 / alpha) / std::tgamma(3.0 / alpha));
  std::vector<double> out(n);
  for (double& v : out) v = (sign(rng) ? 1.0 : -1.0) * s * std::pow(gamma(rng), 1.0 / alpha);
  return out;
}

TEST(GgdMomentRatio, StrictlyIncreasing) {
  double prev = GgdMomentRatio(kMinAlpha);
  for (double a = kMinAlpha + 0.01; a <= kMaxAlpha; a += 0.01) {
    const double r = GgdMomentRatio(a);
    ASSERT_GT(r, prev) << a;
    prev = r;
  }
  EXPECT_NEAR(GgdMomentRatio(2.0), 2.0 / M_PI, 1e-14);
  EXPECT_NEAR(GgdMomentRatio(1.0), 0.5, 1e-14);
}

TEST(FitUggd, RecoversGeneratorParameters) {
  for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
    const auto samples = SampleGgd(alpha, 1.0, 100000, 7);
    const auto start = std::chrono::steady_clock::now();
    const UggdParams p = FitUggd(samples);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_NEAR(p.alpha, alpha, 0.07 * alpha) << alpha;
    EXPECT_NEAR(p.beta, 1.0, 0.03) << alpha;
    EXPECT_LT(seconds, 1.0);
  }
}

TEST(FitUggd, GaussianAndLaplacianSamples) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> g(100000);
  for (double& v : g) v = normal(rng);
  const UggdParams pg = FitUggd(g);
  EXPECT_GE(pg.alpha, 1.9);
  EXPECT_LE(pg.alpha, 2.1);
  EXPECT_GE(pg.beta, 0.97);
  EXPECT_LE(pg.beta, 1.03);

  std::exponential_distribution<double> expo(std::sqrt(2.0));
  std::bernoulli_distribution sign(0.5);
  std::vector<double> l(100000);
  for (double& v : l) v = (sign(rng) ? 1 : -1) * expo(rng);
  const UggdParams pl = FitUggd(l);
  EXPECT_GE(pl.alpha, 0.93);
  EXPECT_LE(pl.alpha, 1.07);
}

TEST(FitUggd, ScaleEquivariance) {
  const auto samples = SampleGgd(1.3, 2.0, 20000, 5);
  const UggdParams base = FitUggd(samples);
  for (double k : {0.25, 3.0, 10.0}) {
    std::vector<double> scaled(samples);
    for (double& v : scaled) v *= k;
    const UggdParams p = FitUggd(scaled);
    EXPECT_NEAR(p.alpha, base.alpha, 1e-6);
    EXPECT_NEAR(p.beta, k * base.beta, 1e-6 * k * base.beta);
  }
}

TEST(FitUggd, DegenerateAndInvalidInputs) {
  const std::vector<double> constant(500, 3.25);
  try {
    FitUggd(constant);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerate);
  }
  EXPECT_THROW(FitUggd(std::vector<double>(50, 1.0)), Error);
}

CyclopeanVolume NoiseVolume(int w, int h, int t, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<float> n(128.0f, 20.0f);
  CyclopeanVolume v(w, h, t);
  for (float& x : v.data()) x = n(rng);
  return v;
}

TEST(ExtractFeatures, ShapeAndWhiteNoiseShape) {
  const KernelBank bank(MakeOrientations(), SteerableParams{});
  const CyclopeanVolume v = NoiseVolume(240, 240, 32, 3);
  const FeatureMatrix m = ExtractFeatures(v, PartitionPatches(240, 240), bank, 1);
  ASSERT_EQ(m.rows, 4);
  ASSERT_EQ(m.cols, 270);
  for (int h = 0; h < 135; ++h) {
    double mean = 0.0;
    for (int r = 0; r < m.rows; ++r) mean += m.at(r, h) / m.rows;
    EXPECT_GE(mean, 1.7) << h;
    EXPECT_LE(mean, 2.3) << h;
  }
  for (int r = 0; r < m.rows; ++r) {
    EXPECT_EQ(m.degenerate[r], 0);
    for (int c = 135; c < 270; ++c) EXPECT_GT(m.at(r, c), 0.0);
  }
}

TEST(ExtractFeatures, DeterministicAcrossRunsAndThreads) {
  const KernelBank bank(MakeOrientations(), SteerableParams{});
  const CyclopeanVolume v = NoiseVolume(120, 240, 9, 4);
  const PatchGrid grid = PartitionPatches(120, 240);
  const FeatureMatrix a = ExtractFeatures(v, grid, bank, 1);
  const FeatureMatrix b = ExtractFeatures(CyclopeanVolume(v), grid, bank, 1);
  const FeatureMatrix c = ExtractFeatures(v, grid, bank, 3);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.values, c.values);
}

TEST(ExtractFeatures, FlatPatchIsSubstituted) {
  const KernelBank bank(MakeOrientations(), SteerableParams{});
  CyclopeanVolume v = NoiseVolume(240, 120, 9, 5);
  for (int t = 0; t < 9; ++t)
    for (int y = 0; y < 120; ++y)
      for (int x = 120; x < 240; ++x) v(x, y, t) = 90.0f;
  const FeatureMatrix m = ExtractFeatures(v, PartitionPatches(240, 120), bank, 1);
  EXPECT_EQ(m.degenerate[0], 0);
  EXPECT_EQ(m.degenerate[1], 1);
  for (int h = 0; h < 135; ++h) {
    EXPECT_EQ(m.at(1, h), 2.0);
    EXPECT_EQ(m.at(1, 135 + h), kDegenerateBeta);
  }
  const CyclopeanVolume flat(240, 120, 9, 50.0f);
  try {
    ExtractFeatures(flat, PartitionPatches(240, 120), bank, 1);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerate);
  }
}

TEST(FeatureMatrixFile, RoundTrip) {
  testing::TempDir dir("feat");
  FeatureMatrix m;
  m.rows = 3;
  m.cols = 4;
  m.tag = SourceTag::kPristine;
  m.values = {0.1, 1.0 / 3.0, 2.0, 1e-6, 5, 6, 7, 8, 9.125, -1e300, 3e-300, 12};
  m.degenerate.assign(3, 0);
  WriteFeatureMatrix(dir / "m.txt", m);
  const FeatureMatrix back = ReadFeatureMatrix(dir / "m.txt");
  EXPECT_EQ(back.rows, 3);
  EXPECT_EQ(back.cols, 4);
  EXPECT_EQ(back.tag, SourceTag::kPristine);
  EXPECT_EQ(back.values, m.values);
}

TEST(StackRows, ConcatenatesInOrder) {
  FeatureMatrix a{1, 2, SourceTag::kDistorted, {1, 2}, {0}};
  FeatureMatrix b{2, 2, SourceTag::kDistorted, {3, 4, 5, 6}, {1, 0}};
  const FeatureMatrix s = StackRows({a, b}, SourceTag::kPristine);
  EXPECT_EQ(s.rows, 3);
  EXPECT_EQ(s.values, (std::vector<double>{1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(s.degenerate, (std::vector<std::uint8_t>{0, 1, 0}));
  FeatureMatrix c{1, 3, SourceTag::kDistorted, {1, 2, 3}, {0}};
  EXPECT_THROW(StackRows({a, c}, SourceTag::kPristine), Error);
}

}  // namespace
}  // namespace cbse
