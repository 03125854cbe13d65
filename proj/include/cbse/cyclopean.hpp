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

#ifndef CBSE_CYCLOPEAN_HPP_
#define CBSE_CYCLOPEAN_HPP_

#include <vector>

#include "cbse/disparity.hpp"
#include "cbse/plane.hpp"

namespace cbse {

// Per-pixel fusion weights; left + right == 1 everywhere.
struct ViewWeights {
  PlaneD left;
  PlaneD right;
};

// Single-precision storage of the fused video, frames x height x width.
using CyclopeanVolume = Volume<float>;

struct PatchOrigin {
  int x = 0;
  int y = 0;
};

// Nonoverlapping block_w x block_h tiles in row-major order, anchored at the
// top-left corner; right and bottom remainders are dropped.
struct PatchGrid {
  int block_w = 0;
  int block_h = 0;
  int cols = 0;
  int rows = 0;
  std::vector<PatchOrigin> origins;

  int patch_count() const { return static_cast<int>(origins.size()); }
};

// W_L = rms_L / (rms_L + rms_R), where rms_L is the RMS of the left saliency
// over a window at (x, y) and rms_R the RMS of the right saliency over a
// window at (x + d, y), clamped to the frame. Zero energy on both sides
// gives 0.5 / 0.5.
ViewWeights ComputeWeights(const PlaneD& saliency_left, const PlaneD& saliency_right,
                           const DisparityMap& disparity, int window = 17);

// C(x, y) = W_L(x, y) I_L(x, y) + W_R(x, y) I_R(clamp(x + d), y).
PlaneD BuildCyclopean(const PlaneD& left, const PlaneD& right,
                      const DisparityMap& disparity, const ViewWeights& weights);

PatchGrid PartitionPatches(int width, int height, int block_w = 120, int block_h = 120);

}  // namespace cbse

#endif  // CBSE_CYCLOPEAN_HPP_
