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

#include "cbse/quality_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cbse/error.hpp"
#include "gtest/gtest.h"

namespace cbse {
namespace {

FeatureMatrix Matrix(int rows, int cols, std::vector<double> values) {
  FeatureMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.values = std::move(values);
  m.degenerate.assign(rows, 0);
  return m;
}

FeatureMatrix RandomMatrix(int rows, int cols, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  std::vector<double> v(static_cast<std::size_t>(rows) * cols);
  for (double& x : v) x = u(rng);
  return Matrix(rows, cols, std::move(v));
}

TEST(FitMvg, HandComputedToy) {
  const MvgModel m = FitMvg(Matrix(2, 2, {1, 3, 3, 1}), 0.0);
  EXPECT_EQ(m.mu, (std::vector<double>{2, 2}));
  EXPECT_EQ(m.sigma, (std::vector<double>{2, -2, -2, 2}));
  EXPECT_EQ(m.shrinkage_lambda, 0.0);
  const MvgModel shrunk = FitMvg(Matrix(2, 2, {1, 3, 3, 1}));
  EXPECT_DOUBLE_EQ(shrunk.shrinkage_lambda, 1e-6 * 4.0 / 2.0);
  EXPECT_DOUBLE_EQ(shrunk.cov(0, 0), 2.0 + 2e-6);
  EXPECT_DOUBLE_EQ(shrunk.cov(0, 1), -2.0);
}

TEST(FitMvg, IdenticalRowsAreDegenerate) {
  const MvgModel m = FitMvg(Matrix(3, 2, {4, 5, 4, 5, 4, 5}));
  EXPECT_TRUE(m.degenerate);
  EXPECT_EQ(m.shrinkage_lambda, 0.0);
  for (double v : m.sigma) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(m.mu, (std::vector<double>{4, 5}));
}

TEST(FitMvg, MatchesTwoPassOracle) {
  const int n = 37, d = 19;
  const FeatureMatrix f = RandomMatrix(n, d, 3);
  const MvgModel m = FitMvg(f, 0.0);
  for (int j = 0; j < d; ++j) {
    double mean = 0.0;
    for (int r = 0; r < n; ++r) mean += f.at(r, j);
    mean /= n;
    EXPECT_NEAR(m.mu[j], mean, 1e-12);
  }
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double mi = 0, mj = 0;
      for (int r = 0; r < n; ++r) mi += f.at(r, i), mj += f.at(r, j);
      mi /= n, mj /= n;
      double c = 0.0;
      for (int r = 0; r < n; ++r) c += (f.at(r, i) - mi) * (f.at(r, j) - mj);
      EXPECT_NEAR(m.cov(i, j), c / (n - 1), 1e-10);
    }
  }
}

TEST(FitMvg, NeedsTwoRows) {
  EXPECT_THROW(FitMvg(Matrix(1, 2, {1, 2})), Error);
}

TEST(BhattacharyyaMean, ClosedForms) {
  EXPECT_NEAR(BhattacharyyaMean(std::vector<double>(270, 1.0), std::vector<double>(270, 1.0)),
              std::log(270.0), 1e-12);
  EXPECT_NEAR(BhattacharyyaMean(std::vector<double>{4}, std::vector<double>{1}), std::log(2.0), 1e-15);
  EXPECT_NEAR(BhattacharyyaMean(std::vector<double>{1, 4}, std::vector<double>{4, 1}), std::log(4.0), 1e-15);
  EXPECT_THROW(BhattacharyyaMean(std::vector<double>{1, 0}, std::vector<double>{1, 1}), Error);
  EXPECT_THROW(BhattacharyyaMean(std::vector<double>{1}, std::vector<double>{1, 1}), Error);
}

std::vector<double> ScaledIdentity(int d, double s) {
  std::vector<double> m(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) m[static_cast<std::size_t>(i) * d + i] = s;
  return m;
}

TEST(BhattacharyyaCov, ClosedForms) {
  EXPECT_NEAR(BhattacharyyaCov(ScaledIdentity(270, 1), ScaledIdentity(270, 1)).value,
              std::log(270.0), 1e-12);
  EXPECT_NEAR(BhattacharyyaCov(ScaledIdentity(270, 1), ScaledIdentity(270, 4)).value,
              std::log(540.0), 1e-12);
  // Opposite-sign entries contribute nothing.
  const std::vector<double> p = {1, -2, -2, 1};
  const std::vector<double> q = {1, 3, 3, 1};
  EXPECT_NEAR(BhattacharyyaCov(p, q).value, std::log(2.0), 1e-15);
  const CovarianceDistance zero = BhattacharyyaCov(std::vector<double>(4, 0.0), q);
  EXPECT_TRUE(zero.flagged);
  EXPECT_EQ(zero.value, std::log(1e-12));
}

TEST(Bhattacharyya, SymmetricAndPermutationInvariant) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  std::uniform_real_distribution<double> s(-1.0, 1.0);
  std::vector<double> a(50), b(50), ca(2500), cb(2500);
  for (double& v : a) v = u(rng);
  for (double& v : b) v = u(rng);
  for (double& v : ca) v = s(rng);
  for (double& v : cb) v = s(rng);
  EXPECT_NEAR(BhattacharyyaMean(a, b), BhattacharyyaMean(b, a), 1e-14);
  EXPECT_NEAR(BhattacharyyaCov(ca, cb).value, BhattacharyyaCov(cb, ca).value, 1e-14);

  std::vector<int> perm(50);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<double> pa(50), pb(50), pca(2500), pcb(2500);
  for (int i = 0; i < 50; ++i) {
    pa[i] = a[perm[i]];
    pb[i] = b[perm[i]];
    for (int j = 0; j < 50; ++j) {
      pca[i * 50 + j] = ca[perm[i] * 50 + perm[j]];
      pcb[i * 50 + j] = cb[perm[i] * 50 + perm[j]];
    }
  }
  EXPECT_NEAR(BhattacharyyaMean(pa, pb), BhattacharyyaMean(a, b), 1e-12);
  EXPECT_NEAR(BhattacharyyaCov(pca, pcb).value, BhattacharyyaCov(ca, cb).value, 1e-12);
}

TEST(CompareModels, SelfComparisonClosedForm) {
  const MvgModel m = FitMvg(RandomMatrix(40, 270, 9));
  const QualityScore q = CompareModels(m, m);
  double sum_mu = 0.0, sum_sigma = 0.0;
  for (double v : m.mu) sum_mu += v;
  for (double v : m.sigma) sum_sigma += std::abs(v);
  EXPECT_NEAR(q.s_mu, std::log(sum_mu), 1e-12);
  EXPECT_NEAR(q.s_sigma, std::log(sum_sigma), 1e-12);
  EXPECT_EQ(q.cbse, q.s_mu * q.s_sigma);
  EXPECT_FALSE(q.sigma_flagged);
}

TEST(CompareModels, UnitModelsGiveLogSquared) {
  MvgModel a;
  a.dimension = 270;
  a.mu.assign(270, 1.0);
  a.sigma = ScaledIdentity(270, 1.0);
  const QualityScore q = CompareModels(a, a);
  EXPECT_NEAR(q.s_mu, std::log(270.0), 1e-12);
  EXPECT_NEAR(q.s_sigma, std::log(270.0), 1e-12);
  EXPECT_EQ(q.cbse, q.s_mu * q.s_sigma);
}

}  // namespace
}  // namespace cbse
