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

#include "cbse/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cbse/image_ops.hpp"

namespace cbse {

namespace {

// Local mean absolute deviation over 3x3 neighborhoods.
PlaneD LocalMad(const PlaneD& level) {
  const PlaneD mean = BoxMean(level, 1);
  PlaneD dev(level.width(), level.height());
  for (std::size_t i = 0; i < dev.size(); ++i) {
    dev.data()[i] = std::abs(level.data()[i] - mean.data()[i]);
  }
  return BoxMean(dev, 1);
}

}  // namespace

GraphActivation ActivateFeatureGraph(const PlaneD& feature, double sigma,
                                     double tolerance, int max_iterations) {
  Require(sigma > 0.0, "saliency: graph sigma must be positive");
  const int lw = feature.width();
  const int lh = feature.height();
  const int n = lw * lh;
  const std::vector<double>& f = feature.data();

  std::vector<double> falloff(static_cast<std::size_t>(lw) * lh);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  for (int dy = 0; dy < lh; ++dy) {
    for (int dx = 0; dx < lw; ++dx) {
      falloff[static_cast<std::size_t>(dy) * lw + dx] =
          std::exp(-static_cast<double>(dx * dx + dy * dy) * inv);
    }
  }

  // Applies v -> sum_p v[p] * W(p, q) using the symmetry of W.
  auto weighted_sum = [&](const std::vector<double>& v, std::vector<double>& out) {
    for (int q = 0; q < n; ++q) {
      const int qx = q % lw;
      const int qy = q / lw;
      const double fq = f[q];
      double acc = 0.0;
      for (int py = 0; py < lh; ++py) {
        const double* g = falloff.data() + static_cast<std::size_t>(std::abs(py - qy)) * lw;
        const int base = py * lw;
        for (int px = 0; px < lw; ++px) {
          acc += v[base + px] * std::abs(f[base + px] - fq) * g[std::abs(px - qx)];
        }
      }
      out[q] = acc;
    }
  };

  GraphActivation result;
  std::vector<double> degree(n);
  weighted_sum(std::vector<double>(n, 1.0), degree);
  const double total = std::accumulate(degree.begin(), degree.end(), 0.0);
  // Any zero degree implies a constant feature, hence total == 0.
  if (!(total > 0.0)) return result;

  // The weights are symmetric, so the chain is reversible and its equilibrium
  // is proportional to node degree; start there and iterate to confirm.
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = degree[i] / total;
  std::vector<double> scaled(n);
  std::vector<double> next(n);
  for (int it = 1; it <= max_iterations; ++it) {
    for (int i = 0; i < n; ++i) scaled[i] = v[i] / degree[i];
    weighted_sum(scaled, next);
    double residual = 0.0;
    for (int i = 0; i < n; ++i) residual += std::abs(next[i] - v[i]);
    result.iterations = it;
    result.residual = residual;
    if (residual < tolerance) {
      result.converged = true;
      result.stationary = v;
      return result;
    }
    const double s = std::accumulate(next.begin(), next.end(), 0.0);
    for (int i = 0; i < n; ++i) v[i] = next[i] / s;
  }
  result.stationary = v;
  return result;
}

std::vector<PlaneD> ContrastFeatures(const PlaneD& luma, const SaliencyOptions& options) {
  PlaneD shifted = luma;
  const double lo = *std::min_element(luma.data().begin(), luma.data().end());
  for (double& v : shifted.data()) v -= lo;

  const PlaneD base = DownsampleBox(shifted, options.lattice_factor);
  std::vector<PlaneD> features;
  features.reserve(options.scales);
  for (int s = 0; s < options.scales; ++s) {
    const PlaneD level = s == 0 ? base : DownsampleBox(base, 1 << s);
    PlaneD mad = LocalMad(level);
    if (!mad.same_shape(base)) mad = ResizeBilinear(mad, base.width(), base.height());
    features.push_back(std::move(mad));
  }
  return features;
}

SaliencyMap ComputeSaliency(const PlaneD& luma, const SaliencyOptions& options) {
  Require(luma.width() >= 32 && luma.height() >= 32,
          "saliency: plane must be at least 32x32");
  const int w = luma.width();
  const int h = luma.height();

  SaliencyMap out;
  const std::vector<PlaneD> features = ContrastFeatures(luma, options);
  const int lw = features.front().width();
  const int lh = features.front().height();
  const double sigma = options.sigma_fraction * std::hypot(lw, lh);

  PlaneD lattice(lw, lh, 0.0);
  bool any = false;
  for (const PlaneD& feature : features) {
    const GraphActivation act =
        ActivateFeatureGraph(feature, sigma, options.tolerance, options.max_iterations);
    if (act.stationary.empty()) continue;
    if (!act.converged) {
      out.nonconverged = true;
      continue;
    }
    any = true;
    for (std::size_t i = 0; i < lattice.size(); ++i) lattice.data()[i] += act.stationary[i];
  }

  if (!any) {
    out.map = PlaneD(w, h, 1.0 / (static_cast<double>(w) * h));
    out.uniform_fallback = true;
    return out;
  }

  out.map = ResizeBilinear(lattice, w, h);
  double sum = 0.0;
  for (double& v : out.map.data()) {
    v = std::max(v, 0.0);
    sum += v;
  }
  for (double& v : out.map.data()) v /= sum;
  return out;
}

}  // namespace cbse
