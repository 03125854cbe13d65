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

#include "cbse/image_ops.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cbse {

namespace {

// Running-window sum along one line of `n` samples read through `get`.
template <typename Get>
void WindowSums(int n, int radius, Get get, std::vector<double>& prefix,
                double* out, std::ptrdiff_t out_stride) {
  const int padded = n + 2 * radius;
  prefix.assign(static_cast<std::size_t>(padded) + 1, 0.0);
  for (int i = 0; i < padded; ++i) {
    prefix[i + 1] = prefix[i] + get(ReflectIndex(i - radius, n));
  }
  const int span = 2 * radius + 1;
  for (int i = 0; i < n; ++i) {
    out[i * out_stride] = prefix[i + span] - prefix[i];
  }
}

}  // namespace

PlaneD BoxMean(const PlaneD& in, int radius) {
  Require(radius >= 0, "box radius must be non-negative");
  const int w = in.width();
  const int h = in.height();
  PlaneD horiz(w, h);
  std::vector<double> prefix;
  for (int y = 0; y < h; ++y) {
    const double* src = in.row(y);
    WindowSums(w, radius, [src](int i) { return src[i]; }, prefix, horiz.row(y), 1);
  }
  PlaneD out(w, h);
  const double norm = 1.0 / static_cast<double>((2 * radius + 1) * (2 * radius + 1));
  for (int x = 0; x < w; ++x) {
    WindowSums(h, radius, [&](int i) { return horiz(x, i); }, prefix,
               &out(x, 0), w);
  }
  for (double& v : out.data()) v *= norm;
  return out;
}

PlaneD DownsampleBox(const PlaneD& in, int factor) {
  Require(factor >= 1, "downsample factor must be >= 1");
  const int ow = std::max(1, in.width() / factor);
  const int oh = std::max(1, in.height() / factor);
  const int fx = std::min(factor, in.width());
  const int fy = std::min(factor, in.height());
  PlaneD out(ow, oh);
  const double norm = 1.0 / static_cast<double>(fx * fy);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double sum = 0.0;
      for (int dy = 0; dy < fy; ++dy) {
        const double* src = in.row(y * fy + dy) + x * fx;
        for (int dx = 0; dx < fx; ++dx) sum += src[dx];
      }
      out(x, y) = sum * norm;
    }
  }
  return out;
}

PlaneD ResizeBilinear(const PlaneD& in, int width, int height) {
  PlaneD out(width, height);
  const double sx = static_cast<double>(in.width()) / width;
  const double sy = static_cast<double>(in.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, in.height() - 1.0);
    const int y0 = static_cast<int>(std::floor(fy));
    const int y1 = std::min(y0 + 1, in.height() - 1);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, in.width() - 1.0);
      const int x0 = static_cast<int>(std::floor(fx));
      const int x1 = std::min(x0 + 1, in.width() - 1);
      const double wx = fx - x0;
      const double top = (1.0 - wx) * in(x0, y0) + wx * in(x1, y0);
      const double bottom = (1.0 - wx) * in(x0, y1) + wx * in(x1, y1);
      out(x, y) = (1.0 - wy) * top + wy * bottom;
    }
  }
  return out;
}

PlaneD ToReal(const PlaneU8& in) {
  PlaneD out(in.width(), in.height());
  std::transform(in.data().begin(), in.data().end(), out.data().begin(),
                 [](std::uint8_t v) { return static_cast<double>(v); });
  return out;
}

}  // namespace cbse
