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

#include <cmath>
#include <string>

namespace cbse {

namespace {
constexpr double kLogFloor = 1e-12;
}

MvgModel FitMvg(const FeatureMatrix& features, double shrinkage) {
  if (features.rows < 2) {
    Fail(ErrorCode::kInvalidArgument,
         "MVG fit needs at least 2 rows, got " + std::to_string(features.rows));
  }
  const int d = features.cols;
  const int n = features.rows;
  MvgModel m;
  m.dimension = d;
  m.sample_count = n;
  m.mu.assign(d, 0.0);
  for (int r = 0; r < n; ++r) {
    const double* row = features.row(r);
    for (int c = 0; c < d; ++c) m.mu[c] += row[c];
  }
  for (double& v : m.mu) v /= n;

  m.sigma.assign(static_cast<std::size_t>(d) * d, 0.0);
  std::vector<double> centered(d);
  for (int r = 0; r < n; ++r) {
    const double* row = features.row(r);
    for (int c = 0; c < d; ++c) centered[c] = row[c] - m.mu[c];
    for (int i = 0; i < d; ++i) {
      const double ci = centered[i];
      double* dst = m.sigma.data() + static_cast<std::size_t>(i) * d;
      for (int j = i; j < d; ++j) dst[j] += ci * centered[j];
    }
  }
  double trace = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const double v = m.sigma[static_cast<std::size_t>(i) * d + j] / (n - 1);
      m.sigma[static_cast<std::size_t>(i) * d + j] = v;
      m.sigma[static_cast<std::size_t>(j) * d + i] = v;
    }
    trace += m.sigma[static_cast<std::size_t>(i) * d + i];
  }
  m.shrinkage_lambda = shrinkage * trace / d;
  for (int i = 0; i < d; ++i) m.sigma[static_cast<std::size_t>(i) * d + i] += m.shrinkage_lambda;
  m.degenerate = !(trace > 0.0);
  return m;
}

double BhattacharyyaMean(std::span<const double> mu_pristine, std::span<const double> mu_test) {
  Require(mu_pristine.size() == mu_test.size(), "mean vectors differ in length");
  Require(!mu_pristine.empty(), "mean vectors are empty");
  double sum = 0.0;
  for (std::size_t k = 0; k < mu_pristine.size(); ++k) {
    if (!(mu_pristine[k] > 0.0) || !(mu_test[k] > 0.0)) {
      Fail(ErrorCode::kInvalidArgument,
           "mean entry " + std::to_string(k) + " is not positive");
    }
    sum += std::sqrt(mu_pristine[k] * mu_test[k]);
  }
  return std::log(sum);
}

CovarianceDistance BhattacharyyaCov(std::span<const double> sigma_pristine,
                                    std::span<const double> sigma_test) {
  if (sigma_pristine.size() != sigma_test.size()) {
    Fail(ErrorCode::kInvalidArgument, "covariance matrices differ in dimension");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < sigma_pristine.size(); ++k) {
    const double p = sigma_pristine[k] * sigma_test[k];
    if (p > 0.0) sum += std::sqrt(p);
  }
  CovarianceDistance out;
  if (sum > 0.0) {
    out.value = std::log(sum);
  } else {
    out.value = std::log(kLogFloor);
    out.flagged = true;
  }
  return out;
}

QualityScore CompareModels(const MvgModel& pristine, const MvgModel& test) {
  Require(pristine.dimension == test.dimension, "models differ in dimension");
  QualityScore s;
  s.s_mu = BhattacharyyaMean(pristine.mu, test.mu);
  const CovarianceDistance cov = BhattacharyyaCov(pristine.sigma, test.sigma);
  s.s_sigma = cov.value;
  s.sigma_flagged = cov.flagged;
  s.cbse = s.s_mu * s.s_sigma;
  return s;
}

}  // namespace cbse
