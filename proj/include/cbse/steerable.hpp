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

#ifndef CBSE_STEERABLE_HPP_
#define CBSE_STEERABLE_HPP_

#include <array>
#include <functional>
#include <vector>

#include "cbse/plane.hpp"

namespace cbse {

// Axis of symmetry of a spherical filter. theta is the azimuth and phi the
// elevation angle, both in degrees; (a, b, c) are the direction cosines
//   a = cos(theta) sin(phi), b = sin(theta) sin(phi), c = cos(phi).
struct Orientation {
  double theta = 0.0;
  double phi = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
};

Orientation MakeOrientation(double theta_deg, double phi_deg);

// Orientation given directly by a (not necessarily unit) direction; angles are
// recovered for reporting only.
Orientation OrientationFromDirection(double a, double b, double c);

// The 45 analysis directions: theta in {0, 45, ..., 360} (outer) times
// phi in {-90, -45, 0, 45, 90} (inner). 0 and 360 are both kept.
std::vector<Orientation> MakeOrientations();

inline constexpr std::array<double, 9> kAzimuths = {0, 45, 90, 135, 180, 225, 270, 315, 360};
inline constexpr std::array<double, 5> kElevations = {-90, -45, 0, 45, 90};

struct SteerableParams {
  double sigma = 1.5;
  int order = 2;
  int support = 9;
  int scales = 3;
  double decimation_sigma = 1.0;
};

// K x K x K taps indexed ((t * K) + y) * K + x with the origin at the center.
struct SteerableKernel {
  Orientation orientation;
  double sigma = 0.0;
  int order = 0;
  int support = 0;
  std::vector<double> taps;

  double at(int dx, int dy, int dt) const {
    const int r = support / 2;
    return taps[(static_cast<std::size_t>(dt + r) * support + (dy + r)) * support + (dx + r)];
  }
};

// exp(-r^2 / (2 sigma^2)) * H_M(m / sigma) with m = a x + b y + c t and H_M
// the physicists' Hermite polynomial, then mean-removed and unit L2 norm.
SteerableKernel BuildKernel(const Orientation& o, double sigma, int order, int support);

// A kernel written as a sum of separable terms
//   taps = sum_k coef_k * x^i y^j t^k g(x) g(y) g(t)  +  box * 1,
// with g the 1-D Gaussian of the kernel's sigma.
struct SeparableTerm {
  int px = 0;
  int py = 0;
  int pt = 0;
  double coef = 0.0;
};

struct SeparableExpansion {
  std::vector<SeparableTerm> terms;  // fixed monomial order for a given order M
  double box = 0.0;
};

SeparableExpansion ExpandKernel(const Orientation& o, double sigma, int order, int support);

// Immutable bank of kernels for every analysis direction; shareable.
class KernelBank {
 public:
  KernelBank(std::vector<Orientation> orientations, SteerableParams params);

  const SteerableParams& params() const { return params_; }
  const std::vector<Orientation>& orientations() const { return orientations_; }
  const std::vector<SteerableKernel>& kernels() const { return kernels_; }
  const std::vector<SeparableExpansion>& expansions() const { return expansions_; }
  const std::vector<std::array<int, 3>>& monomials() const { return monomials_; }
  int subband_count() const {
    return params_.scales * static_cast<int>(orientations_.size());
  }

 private:
  SteerableParams params_;
  std::vector<Orientation> orientations_;
  std::vector<SteerableKernel> kernels_;
  std::vector<SeparableExpansion> expansions_;
  std::vector<std::array<int, 3>> monomials_;
};

struct Subband {
  int scale = 0;        // 0-based
  int orientation = 0;  // index into the bank's orientations
  VolumeD coefficients;
};

// Subbands indexed h = scale * orientations + orientation.
struct SubbandStack {
  std::vector<Subband> subbands;
};

// Visits each subband of `patch` in h order. Scale s+1 is the Gaussian
// blurred (decimation_sigma) and 2x spatially decimated scale s; each scale
// is convolved with every kernel (same-size output, symmetric padding in x/y,
// clamped in t). The referenced volume is only valid during the callback.
void ForEachSubband(const VolumeD& patch, const KernelBank& bank,
                    const std::function<void(int h, const VolumeD&)>& visit);

SubbandStack Decompose(const VolumeD& patch, const KernelBank& bank);

// Spatial-only 2x decimation after separable Gaussian blur.
VolumeD DecimateSpatial(const VolumeD& in, double blur_sigma);

// Six second-order basis directions, (±1,...)/sqrt(2) pairs along each
// coordinate plane.
std::array<Orientation, 6> SecondOrderBasis();

// Weights w such that BuildKernel(o) == sum_i w_i * BuildKernel(basis_i),
// for order 2 kernels of the given sigma and support.
std::array<double, 6> SteeringWeights(const Orientation& o, double sigma, int support);

}  // namespace cbse

#endif  // CBSE_STEERABLE_HPP_
