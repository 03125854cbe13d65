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

#include "cbse/nss_features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cbse/parallel.hpp"

namespace cbse {

namespace {

// Subbands whose spread falls below this fraction of the patch's sample
// magnitude are treated as flat (filter round-off only).
constexpr double kFlatFraction = 1e-9;

}  // namespace

double GgdMomentRatio(double alpha) {
  return std::exp(2.0 * std::lgamma(2.0 / alpha) - std::lgamma(1.0 / alpha) -
                  std::lgamma(3.0 / alpha));
}

UggdParams FitUggd(std::span<const double> samples) {
  Require(samples.size() >= 100, "UGGD fit needs at least 100 samples");
  const double n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (double v : samples) sum += v;
  const double mean = sum / n;
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  for (double v : samples) {
    const double z = v - mean;
    abs_sum += std::abs(z);
    sq_sum += z * z;
  }
  if (!(sq_sum > 0.0)) Fail(ErrorCode::kDegenerate, "UGGD fit: zero variance");

  const double m1 = abs_sum / n;
  const double target = m1 * m1 / (sq_sum / n);
  UggdParams p;
  p.beta = std::sqrt(sq_sum / (n - 1.0));

  double lo = kMinAlpha;
  double hi = kMaxAlpha;
  if (target <= GgdMomentRatio(lo)) {
    p.alpha = lo;
  } else if (target >= GgdMomentRatio(hi)) {
    p.alpha = hi;
  } else {
    while (hi - lo > 1e-6) {
      const double mid = 0.5 * (lo + hi);
      if (GgdMomentRatio(mid) < target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    p.alpha = 0.5 * (lo + hi);
  }
  return p;
}

std::string ToString(SourceTag tag) {
  return tag == SourceTag::kPristine ? "pristine" : "distorted";
}

SourceTag SourceTagFromString(const std::string& s) {
  if (s == "pristine") return SourceTag::kPristine;
  if (s == "distorted") return SourceTag::kDistorted;
  Fail(ErrorCode::kMalformedInput, "unknown source tag '" + s + "'");
}

FeatureMatrix StackRows(const std::vector<FeatureMatrix>& parts, SourceTag tag) {
  Require(!parts.empty(), "nothing to stack");
  FeatureMatrix out;
  out.cols = parts.front().cols;
  out.tag = tag;
  for (const auto& p : parts) {
    Require(p.cols == out.cols, "feature matrices disagree on column count");
    out.rows += p.rows;
    out.values.insert(out.values.end(), p.values.begin(), p.values.end());
    out.degenerate.insert(out.degenerate.end(), p.degenerate.begin(), p.degenerate.end());
  }
  return out;
}

FeatureMatrix ExtractFeatures(const CyclopeanVolume& volume, const PatchGrid& grid,
                              const KernelBank& bank, int threads, SourceTag tag) {
  Require(grid.patch_count() > 0, "features: empty patch grid");
  Require(grid.cols * grid.block_w <= volume.width() &&
              grid.rows * grid.block_h <= volume.height(),
          "features: patch grid exceeds the volume");
  const int subbands = bank.subband_count();
  FeatureMatrix m;
  m.rows = grid.patch_count();
  m.cols = 2 * subbands;
  m.tag = tag;
  m.values.assign(static_cast<std::size_t>(m.rows) * m.cols, 0.0);
  m.degenerate.assign(m.rows, 0);

  ParallelFor(m.rows, threads, [&](int g) {
    const PatchOrigin origin = grid.origins[g];
    VolumeD patch(grid.block_w, grid.block_h, volume.frames());
    double magnitude = 0.0;
    for (int t = 0; t < volume.frames(); ++t) {
      for (int y = 0; y < grid.block_h; ++y) {
        for (int x = 0; x < grid.block_w; ++x) {
          const double v = volume(origin.x + x, origin.y + y, t);
          patch(x, y, t) = v;
          magnitude = std::max(magnitude, std::abs(v));
        }
      }
    }
    const double flat = kFlatFraction * std::max(1.0, magnitude);
    double* row = m.values.data() + static_cast<std::size_t>(g) * m.cols;
    ForEachSubband(patch, bank, [&](int h, const VolumeD& coeffs) {
      const std::span<const double> samples(coeffs.data());
      UggdParams p{2.0, kDegenerateBeta};
      bool degenerate = true;
      const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
      if (*hi - *lo > flat) {
        try {
          p = FitUggd(samples);
          degenerate = false;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kDegenerate) throw;
        }
      }
      if (degenerate) m.degenerate[g] = 1;
      row[h] = p.alpha;
      row[subbands + h] = p.beta;
    });
  });

  if (std::all_of(m.degenerate.begin(), m.degenerate.end(), [](auto d) { return d != 0; })) {
    Fail(ErrorCode::kDegenerate, "features: every patch is degenerate (flat video?)");
  }
  return m;
}

void WriteFeatureMatrix(const std::filesystem::path& path, const FeatureMatrix& m) {
  std::ofstream out(path);
  if (!out) Fail(ErrorCode::kIo, path.string() + ": cannot create");
  out << "CBSE-FEATURES 1\n";
  out << "rows " << m.rows << " cols " << m.cols << " tag " << ToString(m.tag) << "\n";
  out.precision(17);
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) {
      if (c) out << ' ';
      out << m.at(r, c);
    }
    out << '\n';
  }
  if (!out) Fail(ErrorCode::kIo, path.string() + ": write error");
}

FeatureMatrix ReadFeatureMatrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, path.string() + ": file not found");
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "CBSE-FEATURES" || version != 1) {
    Fail(ErrorCode::kMalformedInput, path.string() + ": not a feature matrix file");
  }
  std::string k_rows, k_cols, k_tag, tag;
  FeatureMatrix m;
  in >> k_rows >> m.rows >> k_cols >> m.cols >> k_tag >> tag;
  if (!in || k_rows != "rows" || k_cols != "cols" || k_tag != "tag" || m.rows < 0 ||
      m.cols <= 0) {
    Fail(ErrorCode::kMalformedInput, path.string() + ": bad feature matrix header");
  }
  m.tag = SourceTagFromString(tag);
  m.values.resize(static_cast<std::size_t>(m.rows) * m.cols);
  for (double& v : m.values) {
    if (!(in >> v)) Fail(ErrorCode::kMalformedInput, path.string() + ": truncated matrix");
  }
  m.degenerate.assign(m.rows, 0);
  return m;
}

}  // namespace cbse
