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

#ifndef CBSE_NSS_FEATURES_HPP_
#define CBSE_NSS_FEATURES_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cbse/cyclopean.hpp"
#include "cbse/steerable.hpp"

namespace cbse {

// Zero-mean generalized Gaussian: shape alpha, standard deviation beta.
struct UggdParams {
  double alpha = 2.0;
  double beta = 1.0;
};

inline constexpr double kMinAlpha = 0.05;
inline constexpr double kMaxAlpha = 10.0;
inline constexpr double kDegenerateBeta = 1e-6;

// Gamma(2/a)^2 / (Gamma(1/a) Gamma(3/a)), i.e. (E|z|)^2 / E[z^2] of a GGD of
// shape a. Strictly increasing in a.
double GgdMomentRatio(double alpha);

// Moment-matching fit on mean-centered samples: beta is the sample standard
// deviation, alpha inverts GgdMomentRatio by bisection on [0.05, 10].
// Needs >= 100 samples; throws Error(kDegenerate) on zero variance.
UggdParams FitUggd(std::span<const double> samples);

enum class SourceTag { kPristine, kDistorted };

std::string ToString(SourceTag tag);
SourceTag SourceTagFromString(const std::string& s);

// One row per patch: [alpha_1 .. alpha_H, beta_1 .. beta_H].
struct FeatureMatrix {
  int rows = 0;
  int cols = 0;
  SourceTag tag = SourceTag::kDistorted;
  std::vector<double> values;          // row-major
  std::vector<std::uint8_t> degenerate;  // per row: some subband was flat

  const double* row(int r) const { return values.data() + static_cast<std::size_t>(r) * cols; }
  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
};

FeatureMatrix StackRows(const std::vector<FeatureMatrix>& parts, SourceTag tag);

// Per patch column (block_w x block_h x T), decompose into subbands and fit a
// UGGD to each. Flat subbands get (2, 1e-6) and flag their row. Fails when
// every patch is degenerate.
FeatureMatrix ExtractFeatures(const CyclopeanVolume& volume, const PatchGrid& grid,
                              const KernelBank& bank, int threads = 1,
                              SourceTag tag = SourceTag::kDistorted);

// Text cache format:
//   CBSE-FEATURES 1
//   rows <R> cols <C> tag <pristine|distorted>
//   R lines of C numbers, row-major
void WriteFeatureMatrix(const std::filesystem::path& path, const FeatureMatrix& m);
FeatureMatrix ReadFeatureMatrix(const std::filesystem::path& path);

}  // namespace cbse

#endif  // CBSE_NSS_FEATURES_HPP_
