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

#include "cbse/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "cbse/error.hpp"

namespace cbse {

namespace {

void RequireFinite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) Fail(ErrorCode::kInvalidArgument, std::string(what) + " contains non-finite values");
  }
}

double MeanOf(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double SampleVariance(std::span<const double> v) {
  const double m = MeanOf(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / (static_cast<double>(v.size()) - 1.0);
}

double Median(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  return n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

// 1 / (1 + exp(u)) without overflow.
double Sigmoid(double u) {
  if (u > 0.0) {
    const double e = std::exp(-u);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(u));
}

double Sse(const LogisticParams& p, std::span<const double> x, std::span<const double> y) {
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - p(x[i]);
    sse += r * r;
  }
  return sse;
}

bool Solve4(std::array<std::array<double, 4>, 4> m, std::array<double, 4>& rhs) {
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 4; ++row) {
      if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
    }
    if (!(std::abs(m[pivot][col]) > 1e-300)) return false;
    std::swap(m[col], m[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (int row = col + 1; row < 4; ++row) {
      const double f = m[row][col] / m[col][col];
      for (int k = col; k < 4; ++k) m[row][k] -= f * m[col][k];
      rhs[row] -= f * rhs[col];
    }
  }
  for (int row = 3; row >= 0; --row) {
    double s = rhs[row];
    for (int k = row + 1; k < 4; ++k) s -= m[row][k] * rhs[k];
    rhs[row] = s / m[row][row];
  }
  return true;
}

LogisticFit RunLevenbergMarquardt(LogisticParams p, std::span<const double> x,
                                  std::span<const double> y) {
  constexpr int kMaxIterations = 500;
  constexpr double kRelTol = 1e-10;
  const std::size_t n = x.size();
  double sse = Sse(p, x, y);
  double lambda = 1e-3;
  int it = 0;
  for (; it < kMaxIterations && sse > 0.0; ++it) {
    std::array<std::array<double, 4>, 4> jtj{};
    std::array<double, 4> jtr{};
    const double az4 = std::abs(p.z4);
    const double sgn = p.z4 < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = (x[i] - p.z3) / az4;
      const double s = Sigmoid(u);
      const double slope = s * (1.0 - s);  // s^2 e^u
      const double amp = p.z1 - p.z2;
      const std::array<double, 4> g = {s, 1.0 - s, amp * slope / az4,
                                       amp * slope * (x[i] - p.z3) * sgn / (p.z4 * p.z4)};
      const double r = y[i] - p(x[i]);
      for (int a = 0; a < 4; ++a) {
        jtr[a] += g[a] * r;
        for (int b = 0; b < 4; ++b) jtj[a][b] += g[a] * g[b];
      }
    }
    bool accepted = false;
    double new_sse = sse;
    while (lambda < 1e16) {
      auto m = jtj;
      for (int a = 0; a < 4; ++a) m[a][a] += lambda * std::max(jtj[a][a], 1e-12);
      std::array<double, 4> step = jtr;
      if (Solve4(m, step)) {
        LogisticParams trial{p.z1 + step[0], p.z2 + step[1], p.z3 + step[2], p.z4 + step[3]};
        if (trial.z4 != 0.0) {
          new_sse = Sse(trial, x, y);
          if (std::isfinite(new_sse) && new_sse <= sse) {
            p = trial;
            accepted = true;
            lambda = std::max(lambda / 10.0, 1e-12);
            break;
          }
        }
      }
      lambda *= 10.0;
    }
    if (!accepted) break;
    const double change = (sse - new_sse) / sse;
    sse = new_sse;
    if (change < kRelTol) {
      ++it;
      break;
    }
  }
  LogisticFit fit;
  fit.params = p;
  fit.sse = sse;
  fit.iterations = it;
  return fit;
}

}  // namespace

double LogisticParams::operator()(double x) const {
  return (z1 - z2) * Sigmoid((x - z3) / std::abs(z4)) + z2;
}

LogisticFit FitLogistic(std::span<const double> scores, std::span<const double> subjective) {
  Require(scores.size() == subjective.size(), "logistic fit: length mismatch");
  Require(scores.size() >= 5, "logistic fit: needs at least 5 points");
  RequireFinite(scores, "objective scores");
  RequireFinite(subjective, "subjective scores");
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  if (!(*hi > *lo)) Fail(ErrorCode::kInvalidArgument, "logistic fit: objective scores are constant");

  const auto [ymin, ymax] = std::minmax_element(subjective.begin(), subjective.end());
  const LogisticParams start{*ymax, *ymin, Median(scores), std::sqrt(SampleVariance(scores))};
  LogisticFit best = RunLevenbergMarquardt(start, scores, subjective);
  // The same curve can be reached with the plateaus exchanged; try that start
  // too and keep the better optimum.
  if (best.sse > 0.0) {
    const LogisticParams swapped{start.z2, start.z1, start.z3, start.z4};
    LogisticFit alt = RunLevenbergMarquardt(swapped, scores, subjective);
    if (alt.sse < best.sse) best = std::move(alt);
  }
  best.fitted.resize(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) best.fitted[i] = best.params(scores[i]);
  return best;
}

double Pearson(std::span<const double> x, std::span<const double> y) {
  Require(x.size() == y.size() && x.size() >= 2, "pearson: need equal lengths >= 2");
  const double mx = MeanOf(x);
  const double my = MeanOf(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) Fail(ErrorCode::kInvalidArgument, "correlation of a zero-variance input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> Ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double Spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = Ranks(x);
  const auto ry = Ranks(y);
  return Pearson(rx, ry);
}

double Rmse(std::span<const double> predicted, std::span<const double> observed) {
  Require(predicted.size() == observed.size() && !predicted.empty(), "rmse: length mismatch");
  double ss = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    ss += (observed[i] - predicted[i]) * (observed[i] - predicted[i]);
  }
  return std::sqrt(ss / static_cast<double>(predicted.size()));
}

MetricsReport Correlations(std::span<const double> fitted, std::span<const double> subjective,
                           std::span<const double> raw_scores) {
  Require(fitted.size() == subjective.size() && raw_scores.size() == subjective.size(),
          "correlations: length mismatch");
  Require(fitted.size() >= 3, "correlations: need at least 3 points");
  MetricsReport r;
  r.lcc = Pearson(fitted, subjective);
  r.srocc = Spearman(raw_scores, subjective);
  r.rmse = Rmse(fitted, subjective);
  r.fitted.assign(fitted.begin(), fitted.end());
  r.residuals.resize(fitted.size());
  for (std::size_t i = 0; i < fitted.size(); ++i) r.residuals[i] = subjective[i] - fitted[i];
  return r;
}

MetricsReport Evaluate(std::span<const double> raw_scores, std::span<const double> subjective) {
  const LogisticFit fit = FitLogistic(raw_scores, subjective);
  MetricsReport r;
  // A constant subjective vector is fit exactly; Pearson is undefined there.
  const auto [lo, hi] = std::minmax_element(subjective.begin(), subjective.end());
  if (*hi > *lo) {
    r = Correlations(fit.fitted, subjective, raw_scores);
  } else {
    r.fitted = fit.fitted;
    r.residuals.assign(subjective.size(), 0.0);
    for (std::size_t i = 0; i < subjective.size(); ++i) r.residuals[i] = subjective[i] - fit.fitted[i];
    r.rmse = Rmse(fit.fitted, subjective);
    r.lcc = r.srocc = std::numeric_limits<double>::quiet_NaN();
  }
  r.logistic = fit.params;
  return r;
}

double RegularizedIncompleteBeta(double x, double a, double b) {
  Require(a > 0.0 && b > 0.0, "incomplete beta: a and b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  auto continued_fraction = [](double x, double a, double b) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-16;
    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
      const double m2 = 2.0 * m;
      double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
      d = 1.0 + num * d;
      if (std::abs(d) < kTiny) d = kTiny;
      c = 1.0 + num / c;
      if (std::abs(c) < kTiny) c = kTiny;
      d = 1.0 / d;
      h *= d * c;
      num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
      d = 1.0 + num * d;
      if (std::abs(d) < kTiny) d = kTiny;
      c = 1.0 + num / c;
      if (std::abs(c) < kTiny) c = kTiny;
      d = 1.0 / d;
      const double delta = d * c;
      h *= delta;
      if (std::abs(delta - 1.0) < kEps) break;
    }
    return h;
  };
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * continued_fraction(x, a, b) / a;
  return 1.0 - front * continued_fraction(1.0 - x, b, a) / b;
}

double FDistributionCdf(double x, double d1, double d2) {
  Require(d1 > 0.0 && d2 > 0.0, "F distribution: degrees of freedom must be positive");
  if (x <= 0.0) return 0.0;
  return RegularizedIncompleteBeta(d1 * x / (d1 * x + d2), 0.5 * d1, 0.5 * d2);
}

double FDistributionQuantile(double p, double d1, double d2) {
  Require(p > 0.0 && p < 1.0, "F quantile: p must lie in (0, 1)");
  double lo = 0.0;
  double hi = 1.0;
  while (FDistributionCdf(hi, d1, d2) < p) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (FDistributionCdf(mid, d1, d2) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

const char* FTestResult::symbol() const {
  switch (verdict) {
    case FVerdict::kFirstBetter: return "1";
    case FVerdict::kSecondBetter: return "0";
    default: return "-";
  }
}

FTestResult FTest(std::span<const double> residuals_first, std::span<const double> residuals_second,
                  double alpha) {
  Require(residuals_first.size() == residuals_second.size(), "F-test: residual sets differ in length");
  Require(residuals_first.size() >= 10, "F-test: needs at least 10 residuals");
  Require(alpha > 0.0 && alpha < 1.0, "F-test: alpha must lie in (0, 1)");
  const double va = SampleVariance(residuals_first);
  const double vb = SampleVariance(residuals_second);
  if (!(va > 0.0) || !(vb > 0.0)) Fail(ErrorCode::kInvalidArgument, "F-test: zero residual variance");
  const double d1 = static_cast<double>(residuals_first.size()) - 1.0;
  const double d2 = static_cast<double>(residuals_second.size()) - 1.0;
  FTestResult r;
  r.f = va / vb;
  r.lower = FDistributionQuantile(0.5 * alpha, d1, d2);
  r.upper = FDistributionQuantile(1.0 - 0.5 * alpha, d1, d2);
  if (r.f > r.upper) {
    r.verdict = FVerdict::kSecondBetter;
  } else if (r.f < r.lower) {
    r.verdict = FVerdict::kFirstBetter;
  }
  return r;
}

std::vector<NamedValue> ReadNamedValuesCsv(const std::filesystem::path& path,
                                           const std::string& value_column) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, path.string() + ": file not found");
  std::vector<NamedValue> out;
  std::map<std::string, int> seen;
  std::string line;
  int line_no = 0;
  bool header = false;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(trim(f));
    const std::string where = path.string() + ": line " + std::to_string(line_no) + ": ";
    if (!header) {
      if (fields.size() < 2 || fields[0] != "video" || fields[1] != value_column) {
        Fail(ErrorCode::kMalformedInput, where + "expected header 'video," + value_column + "'");
      }
      header = true;
      continue;
    }
    if (fields.size() < 2 || fields[0].empty()) Fail(ErrorCode::kMalformedInput, where + "expected 'video,value'");
    NamedValue v{fields[0], 0.0};
    const std::string& s = fields[1];
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v.value);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v.value)) {
      Fail(ErrorCode::kMalformedInput, where + "value '" + s + "' is not a finite number");
    }
    if (!seen.emplace(v.video, line_no).second) {
      Fail(ErrorCode::kMalformedInput, where + "duplicate video '" + v.video + "'");
    }
    out.push_back(std::move(v));
  }
  if (!header) Fail(ErrorCode::kMalformedInput, path.string() + ": empty file");
  return out;
}

PairedSamples JoinByVideo(const std::vector<NamedValue>& scores,
                          const std::vector<NamedValue>& subjective) {
  std::map<std::string, double> subj;
  for (const auto& s : subjective) subj[s.video] = s.value;
  std::map<std::string, double> sc;
  for (const auto& s : scores) sc[s.video] = s.value;
  PairedSamples out;
  for (const auto& [video, value] : sc) {
    const auto it = subj.find(video);
    if (it == subj.end()) continue;
    out.videos.push_back(video);
    out.scores.push_back(value);
    out.subjective.push_back(it->second);
  }
  return out;
}

}  // namespace cbse
