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

#ifndef CBSE_EVALUATION_HPP_
#define CBSE_EVALUATION_HPP_

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cbse {

// f(x) = (z1 - z2) / (1 + exp((x - z3) / |z4|)) + z2
struct LogisticParams {
  double z1 = 0.0;
  double z2 = 0.0;
  double z3 = 0.0;
  double z4 = 1.0;

  double operator()(double x) const;
};

struct LogisticFit {
  LogisticParams params;
  std::vector<double> fitted;
  double sse = 0.0;
  int iterations = 0;
};

// Damped Gauss-Newton (Levenberg-Marquardt) least squares of the 4-parameter
// logistic, started from z1 = max(y), z2 = min(y), z3 = median(x),
// z4 = std(x); stops when the relative SSE change drops below 1e-10 or after
// 500 iterations. Needs >= 5 finite points and non-constant scores.
LogisticFit FitLogistic(std::span<const double> scores, std::span<const double> subjective);

double Pearson(std::span<const double> x, std::span<const double> y);
// Average ranks for ties.
std::vector<double> Ranks(std::span<const double> x);
double Spearman(std::span<const double> x, std::span<const double> y);
double Rmse(std::span<const double> predicted, std::span<const double> observed);

struct MetricsReport {
  double lcc = 0.0;
  double srocc = 0.0;
  double rmse = 0.0;
  LogisticParams logistic;
  std::vector<double> fitted;
  std::vector<double> residuals;  // subjective - fitted
};

// LCC on (fitted, subjective), SROCC on (raw_scores, subjective), RMSE on the
// residuals.
MetricsReport Correlations(std::span<const double> fitted, std::span<const double> subjective,
                           std::span<const double> raw_scores);

// Logistic fit followed by Correlations.
MetricsReport Evaluate(std::span<const double> raw_scores, std::span<const double> subjective);

// Regularized incomplete beta I_x(a, b) (continued fraction).
double RegularizedIncompleteBeta(double x, double a, double b);
double FDistributionCdf(double x, double d1, double d2);
double FDistributionQuantile(double p, double d1, double d2);

enum class FVerdict { kFirstBetter, kSecondBetter, kIndistinguishable };

struct FTestResult {
  double f = 0.0;  // var(first) / var(second)
  double lower = 0.0;
  double upper = 0.0;
  FVerdict verdict = FVerdict::kIndistinguishable;

  // "1" first significantly better, "0" significantly worse, "-" otherwise.
  const char* symbol() const;
};

// Two-sided variance-ratio test of two residual sets (>= 10 each).
FTestResult FTest(std::span<const double> residuals_first, std::span<const double> residuals_second,
                  double alpha = 0.05);

struct NamedValue {
  std::string video;
  double value = 0.0;
};

// `video,score` (header required); extra columns after the second are
// ignored so DMOS tables (`video,dmos,n_subjects`) parse too.
std::vector<NamedValue> ReadNamedValuesCsv(const std::filesystem::path& path,
                                           const std::string& value_column);

struct PairedSamples {
  std::vector<std::string> videos;
  std::vector<double> scores;
  std::vector<double> subjective;
};

// Inner join on video id, sorted by video id.
PairedSamples JoinByVideo(const std::vector<NamedValue>& scores,
                          const std::vector<NamedValue>& subjective);

}  // namespace cbse

#endif  // CBSE_EVALUATION_HPP_
