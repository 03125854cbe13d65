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

#include "cbse/disparity.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "cbse/image_ops.hpp"

namespace cbse {

namespace {

constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);
// Accept a later (larger |s|) candidate only if it beats the incumbent by
// more than rounding noise.
constexpr double kTieEpsilon = 1e-12;

// Padded copy with pad_x columns and pad_y rows of symmetric extension.
struct Padded {
  int width = 0;
  int height = 0;
  std::vector<double> data;
  const double* row(int y) const { return data.data() + static_cast<std::size_t>(y) * width; }
};

Padded PadSymmetric(const PlaneD& in, int pad_x, int pad_y) {
  Padded p;
  p.width = in.width() + 2 * pad_x;
  p.height = in.height() + 2 * pad_y;
  p.data.resize(static_cast<std::size_t>(p.width) * p.height);
  for (int y = 0; y < p.height; ++y) {
    const double* src = in.row(ReflectIndex(y - pad_y, in.height()));
    double* dst = p.data.data() + static_cast<std::size_t>(y) * p.width;
    for (int x = 0; x < p.width; ++x) dst[x] = src[ReflectIndex(x - pad_x, in.width())];
  }
  return p;
}

// Window sums of side `span` over all fully-covered positions of a
// width x height buffer; output is (width-span+1) x (height-span+1).
void ValidWindowSums(const double* in, int width, int height, int span,
                     std::vector<double>& scratch, std::vector<double>& out) {
  const int ow = width - span + 1;
  const int oh = height - span + 1;
  scratch.resize(static_cast<std::size_t>(ow) * height);
  for (int y = 0; y < height; ++y) {
    const double* src = in + static_cast<std::size_t>(y) * width;
    double* dst = scratch.data() + static_cast<std::size_t>(y) * ow;
    double s = 0.0;
    for (int i = 0; i < span; ++i) s += src[i];
    dst[0] = s;
    for (int x = 1; x < ow; ++x) {
      s += src[x + span - 1] - src[x - 1];
      dst[x] = s;
    }
  }
  out.assign(static_cast<std::size_t>(ow) * oh, 0.0);
  for (int y = 0; y < span; ++y) {
    const double* src = scratch.data() + static_cast<std::size_t>(y) * ow;
    for (int x = 0; x < ow; ++x) out[x] += src[x];
  }
  for (int y = 1; y < oh; ++y) {
    const double* add = scratch.data() + static_cast<std::size_t>(y + span - 1) * ow;
    const double* sub = scratch.data() + static_cast<std::size_t>(y - 1) * ow;
    const double* prev = out.data() + static_cast<std::size_t>(y - 1) * ow;
    double* dst = out.data() + static_cast<std::size_t>(y) * ow;
    for (int x = 0; x < ow; ++x) dst[x] = prev[x] + add[x] - sub[x];
  }
}

}  // namespace

DisparityMap ComputeDisparity(const PlaneD& left, const PlaneD& right,
                              const DisparityOptions& options) {
  Require(left.same_shape(right), "disparity: planes must have the same size");
  Require(options.window >= 3 && options.window % 2 == 1,
          "disparity: window must be odd and >= 3");
  Require(options.max_disparity >= 0, "disparity: max_disparity must be >= 0");
  Require(options.window <= left.width() && options.window <= left.height(),
          "disparity: window exceeds plane dimensions");

  const int w = left.width();
  const int h = left.height();
  const int r = options.window / 2;
  const int span = options.window;
  const int max_d = options.max_disparity;
  const double n = static_cast<double>(span) * span;

  const Padded lp = PadSymmetric(left, r, r);
  const Padded rp = PadSymmetric(right, r + max_d, r);

  std::vector<double> scratch;
  std::vector<double> sum_l, sum_ll, sum_r, sum_rr, sum_lr;
  {
    std::vector<double> sq(lp.data.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = lp.data[i] * lp.data[i];
    ValidWindowSums(lp.data.data(), lp.width, lp.height, span, scratch, sum_l);
    ValidWindowSums(sq.data(), lp.width, lp.height, span, scratch, sum_ll);
    sq.resize(rp.data.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = rp.data[i] * rp.data[i];
    ValidWindowSums(rp.data.data(), rp.width, rp.height, span, scratch, sum_r);
    ValidWindowSums(sq.data(), rp.width, rp.height, span, scratch, sum_rr);
  }
  // sum_r / sum_rr cover window centers x in [-max_d, w + max_d).
  const int rw = w + 2 * max_d;

  std::vector<double> best(static_cast<std::size_t>(w) * h,
                           -std::numeric_limits<double>::infinity());
  DisparityMap disparity(w, h, 0);
  std::vector<double> product(lp.data.size());

  for (int k = 0; k <= 2 * max_d; ++k) {
    // 0, -1, +1, -2, +2, ...
    const int s = (k == 0) ? 0 : ((k % 2 == 1) ? -(k + 1) / 2 : k / 2);
    for (int y = 0; y < lp.height; ++y) {
      const double* lrow = lp.row(y);
      const double* rrow = rp.row(y) + max_d + s;
      double* dst = product.data() + static_cast<std::size_t>(y) * lp.width;
      for (int x = 0; x < lp.width; ++x) dst[x] = lrow[x] * rrow[x];
    }
    ValidWindowSums(product.data(), lp.width, lp.height, span, scratch, sum_lr);

    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t li = static_cast<std::size_t>(y) * w + x;
        const std::size_t ri = static_cast<std::size_t>(y) * rw + (x + s + max_d);
        const double mu_l = sum_l[li] / n;
        const double mu_r = sum_r[ri] / n;
        const double var_l = sum_ll[li] / n - mu_l * mu_l;
        const double var_r = sum_rr[ri] / n - mu_r * mu_r;
        const double cov = sum_lr[li] / n - mu_l * mu_r;
        const double ssim = ((2.0 * mu_l * mu_r + kC1) * (2.0 * cov + kC2)) /
                            ((mu_l * mu_l + mu_r * mu_r + kC1) * (var_l + var_r + kC2));
        if (ssim > best[li] + kTieEpsilon) {
          best[li] = ssim;
          disparity(x, y) = s;
        }
      }
    }
  }
  return disparity;
}

}  // namespace cbse
