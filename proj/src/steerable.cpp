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

#include "cbse/steerable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cbse/image_ops.hpp"

namespace cbse {

namespace {

// Degree trig, exact at multiples of 90; angles equal modulo 360 give
// identical results.
double SinDeg(double deg);
double CosDeg(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r > 180.0) r = 360.0 - r;  // cos is even
  if (r > 90.0) return -CosDeg(180.0 - r);
  if (r == 0.0) return 1.0;
  if (r == 90.0) return 0.0;
  return std::cos(r * std::numbers::pi / 180.0);
}
double SinDeg(double deg) { return CosDeg(90.0 - deg); }

// Coefficients of the physicists' Hermite polynomial H_M, lowest power first.
std::vector<double> HermiteCoefficients(int order) {
  std::vector<double> prev{1.0};
  if (order == 0) return prev;
  std::vector<double> cur{0.0, 2.0};
  for (int n = 1; n < order; ++n) {
    // H_{n+1} = 2u H_n - 2n H_{n-1}
    std::vector<double> next(n + 2, 0.0);
    for (int k = 0; k <= n; ++k) next[k + 1] += 2.0 * cur[k];
    for (int k = 0; k < static_cast<int>(prev.size()); ++k) next[k] -= 2.0 * n * prev[k];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

double HermiteValue(const std::vector<double>& coeffs, double u) {
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * u + *it;
  return v;
}

// Exponent triples (i, j, k) with i + j + k <= order and matching parity,
// ordered by total degree, then by descending i, then descending j.
std::vector<std::array<int, 3>> MonomialsFor(int order) {
  std::vector<std::array<int, 3>> out;
  for (int n = order % 2; n <= order; n += 2) {
    for (int i = n; i >= 0; --i) {
      for (int j = n - i; j >= 0; --j) out.push_back({i, j, n - i - j});
    }
  }
  return out;
}

double Factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

struct RawKernel {
  std::vector<double> taps;  // before mean removal
  double mean = 0.0;
  double norm = 0.0;  // L2 norm after mean removal
};

RawKernel ComputeRaw(const Orientation& o, double sigma, int order, int support) {
  Require(support >= 5 && support % 2 == 1, "kernel support must be odd and >= 5");
  Require(sigma > 0.0, "kernel sigma must be positive");
  Require(order >= 0, "kernel order must be non-negative");
  const int r = support / 2;
  const auto hermite = HermiteCoefficients(order);
  RawKernel raw;
  raw.taps.resize(static_cast<std::size_t>(support) * support * support);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  std::size_t idx = 0;
  double sum = 0.0;
  for (int t = -r; t <= r; ++t) {
    for (int y = -r; y <= r; ++y) {
      for (int x = -r; x <= r; ++x) {
        const double r2 = static_cast<double>(x * x + y * y + t * t);
        const double m = o.a * x + o.b * y + o.c * t;
        const double v = std::exp(-r2 * inv) * HermiteValue(hermite, m / sigma);
        raw.taps[idx++] = v;
        sum += v;
      }
    }
  }
  raw.mean = sum / static_cast<double>(raw.taps.size());
  double ss = 0.0;
  for (double v : raw.taps) ss += (v - raw.mean) * (v - raw.mean);
  raw.norm = std::sqrt(ss);
  if (!(raw.norm > 0.0)) Fail(ErrorCode::kDegenerate, "kernel vanishes after mean removal");
  return raw;
}

// 1-D taps u^p exp(-u^2 / (2 sigma^2)) for u in [-r, r]; p < 0 gives ones.
std::vector<double> MomentTaps(int power, double sigma, int r) {
  std::vector<double> taps(2 * r + 1);
  for (int u = -r; u <= r; ++u) {
    taps[u + r] = power < 0 ? 1.0
                            : std::pow(static_cast<double>(u), power) *
                                  std::exp(-static_cast<double>(u * u) / (2.0 * sigma * sigma));
  }
  return taps;
}

// out(x) = sum_u f(u) in(x - u) along x, symmetric padding.
VolumeD ConvolveX(const VolumeD& in, const std::vector<double>& taps) {
  const int r = static_cast<int>(taps.size()) / 2;
  const int w = in.width();
  VolumeD out(w, in.height(), in.frames());
  std::vector<double> line(w + 2 * r);
  const std::size_t rows = static_cast<std::size_t>(in.height()) * in.frames();
  for (std::size_t row = 0; row < rows; ++row) {
    const double* src = in.data().data() + row * w;
    double* dst = out.data().data() + row * w;
    for (int i = 0; i < w + 2 * r; ++i) line[i] = src[ReflectIndex(i - r, w)];
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      // line[x + r - u] holds in(x - u)
      for (int u = -r; u <= r; ++u) acc += taps[u + r] * line[x + r - u];
      dst[x] = acc;
    }
  }
  return out;
}

VolumeD ConvolveY(const VolumeD& in, const std::vector<double>& taps) {
  const int r = static_cast<int>(taps.size()) / 2;
  const int w = in.width();
  const int h = in.height();
  VolumeD out(w, h, in.frames());
  for (int t = 0; t < in.frames(); ++t) {
    for (int y = 0; y < h; ++y) {
      double* dst = &out(0, y, t);
      for (int u = -r; u <= r; ++u) {
        const double f = taps[u + r];
        const double* src = &in(0, ReflectIndex(y - u, h), t);
        for (int x = 0; x < w; ++x) dst[x] += f * src[x];
      }
    }
  }
  return out;
}

VolumeD ConvolveT(const VolumeD& in, const std::vector<double>& taps) {
  const int r = static_cast<int>(taps.size()) / 2;
  const int n = in.frames();
  const std::size_t stride = in.frame_stride();
  VolumeD out(in.width(), in.height(), n);
  for (int t = 0; t < n; ++t) {
    double* dst = out.data().data() + static_cast<std::size_t>(t) * stride;
    for (int u = -r; u <= r; ++u) {
      const double f = taps[u + r];
      const double* src = in.data().data() + static_cast<std::size_t>(ClampIndex(t - u, n)) * stride;
      for (std::size_t i = 0; i < stride; ++i) dst[i] += f * src[i];
    }
  }
  return out;
}

void Solve6(std::array<std::array<double, 6>, 6> m, std::array<double, 6>& rhs) {
  for (int col = 0; col < 6; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 6; ++row) {
      if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
    }
    if (std::abs(m[pivot][col]) < 1e-14) Fail(ErrorCode::kDegenerate, "singular steering basis");
    std::swap(m[col], m[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (int row = 0; row < 6; ++row) {
      if (row == col) continue;
      const double factor = m[row][col] / m[col][col];
      for (int k = col; k < 6; ++k) m[row][k] -= factor * m[col][k];
      rhs[row] -= factor * rhs[col];
    }
  }
  for (int i = 0; i < 6; ++i) rhs[i] /= m[i][i];
}

std::array<double, 6> QuadraticCoefficients(const Orientation& o) {
  return {o.a * o.a, o.b * o.b, o.c * o.c, 2 * o.a * o.b, 2 * o.a * o.c, 2 * o.b * o.c};
}

}  // namespace

Orientation MakeOrientation(double theta_deg, double phi_deg) {
  Orientation o;
  o.theta = theta_deg;
  o.phi = phi_deg;
  // + 0.0 folds -0 into +0.
  o.a = CosDeg(theta_deg) * SinDeg(phi_deg) + 0.0;
  o.b = SinDeg(theta_deg) * SinDeg(phi_deg) + 0.0;
  o.c = CosDeg(phi_deg) + 0.0;
  return o;
}

Orientation OrientationFromDirection(double a, double b, double c) {
  const double n = std::sqrt(a * a + b * b + c * c);
  Require(n > 0.0, "direction must be non-zero");
  Orientation o;
  o.a = a / n;
  o.b = b / n;
  o.c = c / n;
  o.phi = std::acos(std::clamp(o.c, -1.0, 1.0)) * 180.0 / std::numbers::pi;
  o.theta = std::atan2(o.b, o.a) * 180.0 / std::numbers::pi;
  return o;
}

std::vector<Orientation> MakeOrientations() {
  std::vector<Orientation> out;
  out.reserve(kAzimuths.size() * kElevations.size());
  for (double theta : kAzimuths) {
    for (double phi : kElevations) out.push_back(MakeOrientation(theta, phi));
  }
  return out;
}

SteerableKernel BuildKernel(const Orientation& o, double sigma, int order, int support) {
  RawKernel raw = ComputeRaw(o, sigma, order, support);
  SteerableKernel k;
  k.orientation = o;
  k.sigma = sigma;
  k.order = order;
  k.support = support;
  k.taps = std::move(raw.taps);
  for (double& v : k.taps) v = (v - raw.mean) / raw.norm;
  return k;
}

SeparableExpansion ExpandKernel(const Orientation& o, double sigma, int order, int support) {
  const RawKernel raw = ComputeRaw(o, sigma, order, support);
  const auto hermite = HermiteCoefficients(order);
  const double scale = 1.0 / raw.norm;
  SeparableExpansion e;
  for (const auto& [i, j, k] : MonomialsFor(order)) {
    const int n = i + j + k;
    const double multinomial = Factorial(n) / (Factorial(i) * Factorial(j) * Factorial(k));
    const double coef = scale * hermite[n] * std::pow(sigma, -n) * multinomial *
                        std::pow(o.a, i) * std::pow(o.b, j) * std::pow(o.c, k);
    e.terms.push_back({i, j, k, coef});
  }
  e.box = -scale * raw.mean;
  return e;
}

KernelBank::KernelBank(std::vector<Orientation> orientations, SteerableParams params)
    : params_(params), orientations_(std::move(orientations)) {
  Require(!orientations_.empty(), "kernel bank needs at least one orientation");
  Require(params_.scales >= 1, "kernel bank needs at least one scale");
  Require(params_.decimation_sigma > 0.0, "decimation sigma must be positive");
  monomials_ = MonomialsFor(params_.order);
  for (const auto& o : orientations_) {
    kernels_.push_back(BuildKernel(o, params_.sigma, params_.order, params_.support));
    expansions_.push_back(ExpandKernel(o, params_.sigma, params_.order, params_.support));
  }
}

VolumeD DecimateSpatial(const VolumeD& in, double blur_sigma) {
  const int r = static_cast<int>(std::ceil(3.0 * blur_sigma));
  std::vector<double> taps = MomentTaps(0, blur_sigma, r);
  double sum = 0.0;
  for (double v : taps) sum += v;
  for (double& v : taps) v /= sum;
  const VolumeD blurred = ConvolveY(ConvolveX(in, taps), taps);
  const int ow = in.width() / 2;
  const int oh = in.height() / 2;
  Require(ow >= 1 && oh >= 1, "volume too small to decimate");
  VolumeD out(ow, oh, in.frames());
  for (int t = 0; t < in.frames(); ++t) {
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x) out(x, y, t) = blurred(2 * x, 2 * y, t);
    }
  }
  return out;
}

void ForEachSubband(const VolumeD& patch, const KernelBank& bank,
                    const std::function<void(int h, const VolumeD&)>& visit) {
  const SteerableParams& p = bank.params();
  {
    int w = patch.width();
    int h = patch.height();
    for (int s = 1; s < p.scales; ++s) {
      w /= 2;
      h /= 2;
    }
    if (w < p.support || h < p.support || patch.frames() < p.support) {
      Fail(ErrorCode::kInvalidArgument,
           "patch too small after downsampling: coarsest scale is " + std::to_string(w) +
               "x" + std::to_string(h) + "x" + std::to_string(patch.frames()) +
               ", support is " + std::to_string(p.support));
    }
  }

  const int r = p.support / 2;
  const auto& monomials = bank.monomials();
  const int orientations = static_cast<int>(bank.orientations().size());
  std::vector<std::vector<double>> moment(p.order + 1);
  for (int power = 0; power <= p.order; ++power) moment[power] = MomentTaps(power, p.sigma, r);
  const std::vector<double> ones = MomentTaps(-1, p.sigma, r);

  VolumeD level;
  VolumeD subband;
  for (int s = 0; s < p.scales; ++s) {
    if (s > 0) level = DecimateSpatial(s == 1 ? patch : level, p.decimation_sigma);

    std::vector<VolumeD> basis(monomials.size());
    VolumeD box;
    {
      std::vector<VolumeD> along_t(p.order + 1);
      std::vector<std::vector<VolumeD>> along_ty(p.order + 1,
                                                 std::vector<VolumeD>(p.order + 1));
      const VolumeD& src = s == 0 ? patch : level;
      for (const auto& m : monomials) {
        const int k = m[2];
        if (along_t[k].size() == 0) along_t[k] = ConvolveT(src, moment[k]);
        const int j = m[1];
        if (along_ty[j][k].size() == 0) along_ty[j][k] = ConvolveY(along_t[k], moment[j]);
      }
      for (std::size_t n = 0; n < monomials.size(); ++n) {
        const auto& m = monomials[n];
        basis[n] = ConvolveX(along_ty[m[1]][m[2]], moment[m[0]]);
      }
      box = ConvolveX(ConvolveY(ConvolveT(src, ones), ones), ones);
    }

    const VolumeD& shape = basis.front();
    if (subband.size() != shape.size() || subband.width() != shape.width()) {
      subband = VolumeD(shape.width(), shape.height(), shape.frames());
    }
    for (int o = 0; o < orientations; ++o) {
      const SeparableExpansion& e = bank.expansions()[o];
      std::vector<double>& dst = subband.data();
      const std::size_t n = dst.size();
      const double box_coef = e.box;
      const std::vector<double>& b = box.data();
      for (std::size_t i = 0; i < n; ++i) dst[i] = 0.0;
      for (std::size_t term = 0; term < e.terms.size(); ++term) {
        const double c = e.terms[term].coef;
        const std::vector<double>& src = basis[term].data();
        for (std::size_t i = 0; i < n; ++i) dst[i] += c * src[i];
      }
      for (std::size_t i = 0; i < n; ++i) dst[i] += box_coef * b[i];
      visit(s * orientations + o, subband);
    }
  }
}

SubbandStack Decompose(const VolumeD& patch, const KernelBank& bank) {
  SubbandStack stack;
  const int orientations = static_cast<int>(bank.orientations().size());
  stack.subbands.reserve(bank.subband_count());
  ForEachSubband(patch, bank, [&](int h, const VolumeD& v) {
    stack.subbands.push_back({h / orientations, h % orientations, v});
  });
  return stack;
}

std::array<Orientation, 6> SecondOrderBasis() {
  return {OrientationFromDirection(1, 1, 0), OrientationFromDirection(1, -1, 0),
          OrientationFromDirection(1, 0, 1), OrientationFromDirection(1, 0, -1),
          OrientationFromDirection(0, 1, 1), OrientationFromDirection(0, 1, -1)};
}

std::array<double, 6> SteeringWeights(const Orientation& o, double sigma, int support) {
  // The mean-removed second-order kernel is linear in the six quadratic
  // direction products (a^2, b^2, c^2, 2ab, 2ac, 2bc) for unit directions.
  const auto basis = SecondOrderBasis();
  std::array<std::array<double, 6>, 6> transposed{};
  std::array<double, 6> basis_scale{};
  for (int i = 0; i < 6; ++i) {
    const auto q = QuadraticCoefficients(basis[i]);
    for (int k = 0; k < 6; ++k) transposed[k][i] = q[k];
    basis_scale[i] = 1.0 / ComputeRaw(basis[i], sigma, 2, support).norm;
  }
  std::array<double, 6> w = QuadraticCoefficients(o);
  Solve6(transposed, w);
  const double target_scale = 1.0 / ComputeRaw(o, sigma, 2, support).norm;
  for (int i = 0; i < 6; ++i) w[i] *= target_scale / basis_scale[i];
  return w;
}

}  // namespace cbse
