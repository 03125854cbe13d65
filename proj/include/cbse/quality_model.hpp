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

#ifndef CBSE_QUALITY_MODEL_HPP_
#define CBSE_QUALITY_MODEL_HPP_

#include <span>
#include <vector>

#include "cbse/nss_features.hpp"

namespace cbse {

// Mean vector and (shrunk) covariance of a feature population.
struct MvgModel {
  int dimension = 0;
  std::vector<double> mu;
  std::vector<double> sigma;  // dimension x dimension, row-major, symmetric
  int sample_count = 0;
  double shrinkage_lambda = 0.0;
  bool degenerate = false;  // zero sample covariance

  double cov(int i, int j) const {
    return sigma[static_cast<std::size_t>(i) * dimension + j];
  }
};

inline constexpr double kDefaultShrinkage = 1e-6;

// mu = column means; sigma = sample covariance (n - 1) + lambda I with
// lambda = shrinkage * trace / dimension.
MvgModel FitMvg(const FeatureMatrix& features, double shrinkage = kDefaultShrinkage);

// log(sum_k sqrt(p_k * d_k)) over all entries; entries must be positive.
double BhattacharyyaMean(std::span<const double> mu_pristine, std::span<const double> mu_test);

struct CovarianceDistance {
  double value = 0.0;
  bool flagged = false;  // every clamped product was zero; value = log(1e-12)
};

// log(sum over all entries of sqrt(max(P_ij * D_ij, 0))).
CovarianceDistance BhattacharyyaCov(std::span<const double> sigma_pristine,
                                    std::span<const double> sigma_test);

struct QualityScore {
  double s_mu = 0.0;
  double s_sigma = 0.0;
  double cbse = 0.0;
  bool sigma_flagged = false;
};

QualityScore CompareModels(const MvgModel& pristine, const MvgModel& test);

}  // namespace cbse

#endif  // CBSE_QUALITY_MODEL_HPP_
