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

#ifndef CBSE_SALIENCY_HPP_
#define CBSE_SALIENCY_HPP_

#include <vector>

#include "cbse/plane.hpp"

namespace cbse {

struct SaliencyOptions {
  int lattice_factor = 8;
  int scales = 3;
  double sigma_fraction = 1.0 / 6.0;  // of the lattice diagonal
  double tolerance = 1e-8;            // L1 residual of the stationary vector
  int max_iterations = 10000;
};

struct SaliencyMap {
  PlaneD map;  // non-negative, sums to 1
  // Set when the map fell back to uniform: constant input or a chain that
  // did not settle within the iteration cap.
  bool uniform_fallback = false;
  bool nonconverged = false;
};

// Result of the random-walk equilibrium on one feature lattice.
struct GraphActivation {
  std::vector<double> stationary;  // empty when the graph has no edges
  double residual = 0.0;           // ||v P - v||_1 at termination
  int iterations = 0;
  bool converged = false;
};

// Fully connected graph over the lattice nodes of `feature` with edge weight
// |f(p) - f(q)| * exp(-dist^2 / (2 sigma^2)), row-normalized into a Markov
// matrix; the stationary distribution is found by power iteration.
GraphActivation ActivateFeatureGraph(const PlaneD& feature, double sigma,
                                     double tolerance, int max_iterations);

// Multi-scale luminance contrast features on the 1/lattice_factor lattice.
std::vector<PlaneD> ContrastFeatures(const PlaneD& luma, const SaliencyOptions& options = {});

// Graph-based saliency of a luma plane (at least 32x32).
SaliencyMap ComputeSaliency(const PlaneD& luma, const SaliencyOptions& options = {});

}  // namespace cbse

#endif  // CBSE_SALIENCY_HPP_
