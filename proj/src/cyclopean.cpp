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

#include <cmath>
#include <string>

#include "cbse/image_ops.hpp"

namespace cbse {

namespace {

PlaneD LocalRms(const PlaneD& in, int radius) {
  PlaneD sq(in.width(), in.height());
  for (std::size_t i = 0; i < sq.size(); ++i) sq.data()[i] = in.data()[i] * in.data()[i];
  PlaneD rms = BoxMean(sq, radius);
  // Box means of non-negative values can come out at -0 or a hair below.
  for (double& v : rms.data()) v = v > 0.0 ? std::sqrt(v) : 0.0;
  return rms;
}

}  // namespace

ViewWeights ComputeWeights(const PlaneD& saliency_left, const PlaneD& saliency_right,
                           const DisparityMap& disparity, int window) {
  Require(saliency_left.same_shape(saliency_right) && saliency_left.same_shape(disparity),
          "weights: saliency maps and disparity must have the same size");
  Require(window >= 1 && window % 2 == 1, "weights: window must be odd");
  const int w = saliency_left.width();
  const int h = saliency_left.height();
  const PlaneD rms_left = LocalRms(saliency_left, window / 2);
  const PlaneD rms_right = LocalRms(saliency_right, window / 2);

  ViewWeights weights{PlaneD(w, h), PlaneD(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double l = rms_left(x, y);
      const double r = rms_right(ClampIndex(x + disparity(x, y), w), y);
      const double sum = l + r;
      const double wl = sum > 0.0 ? l / sum : 0.5;
      weights.left(x, y) = wl;
      weights.right(x, y) = 1.0 - wl;
    }
  }
  return weights;
}

PlaneD BuildCyclopean(const PlaneD& left, const PlaneD& right,
                      const DisparityMap& disparity, const ViewWeights& weights) {
  Require(left.same_shape(right) && left.same_shape(disparity) &&
              left.same_shape(weights.left) && left.same_shape(weights.right),
          "cyclopean: all inputs must have the same size");
  const int w = left.width();
  const int h = left.height();
  PlaneD out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int xr = ClampIndex(x + disparity(x, y), w);
      out(x, y) = weights.left(x, y) * left(x, y) + weights.right(x, y) * right(xr, y);
    }
  }
  return out;
}

PatchGrid PartitionPatches(int width, int height, int block_w, int block_h) {
  Require(block_w > 0 && block_h > 0, "patches: block size must be positive");
  if (width < block_w || height < block_h) {
    Fail(ErrorCode::kInvalidArgument,
         "patches: frame " + std::to_string(width) + "x" + std::to_string(height) +
             " is smaller than one " + std::to_string(block_w) + "x" +
             std::to_string(block_h) + " block");
  }
  PatchGrid grid;
  grid.block_w = block_w;
  grid.block_h = block_h;
  grid.cols = width / block_w;
  grid.rows = height / block_h;
  grid.origins.reserve(static_cast<std::size_t>(grid.cols) * grid.rows);
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) grid.origins.push_back({c * block_w, r * block_h});
  }
  return grid;
}

}  // namespace cbse
