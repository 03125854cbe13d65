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

#ifndef CBSE_IMAGE_OPS_HPP_
#define CBSE_IMAGE_OPS_HPP_

#include "cbse/plane.hpp"

namespace cbse {

// Half-sample symmetric extension: ... x1 x0 | x0 x1 ... x(n-1) | x(n-1) ...
// Valid for any integer i, including offsets larger than n.
inline int ReflectIndex(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

inline int ClampIndex(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

// Mean over a (2*radius+1)^2 window, symmetric padding.
PlaneD BoxMean(const PlaneD& in, int radius);

// Box average decimation by an integer factor; trailing partial blocks are
// dropped. Result is at least 1x1.
PlaneD DownsampleBox(const PlaneD& in, int factor);

// Bilinear resampling with pixel-center alignment and edge clamping.
PlaneD ResizeBilinear(const PlaneD& in, int width, int height);

PlaneD ToReal(const PlaneU8& in);

}  // namespace cbse

#endif  // CBSE_IMAGE_OPS_HPP_
