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

#ifndef CBSE_DISPARITY_HPP_
#define CBSE_DISPARITY_HPP_

#include "cbse/plane.hpp"

namespace cbse {

struct DisparityOptions {
  int max_disparity = 64;
  int window = 11;  // odd, >= 3
};

// Per-pixel integer disparity d such that right(x + d, y) matches left(x, y).
using DisparityMap = Plane<int>;

// SSIM block matching over shifts in [-max_disparity, max_disparity] with
// box-window statistics (K1 = 0.01, K2 = 0.03, L = 255). Ties go to the
// smallest |s|, then to the negative shift. Borders use symmetric padding.
DisparityMap ComputeDisparity(const PlaneD& left, const PlaneD& right,
                              const DisparityOptions& options = {});

}  // namespace cbse

#endif  // CBSE_DISPARITY_HPP_
