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

#include "cbse/subjective.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "cbse/error.hpp"

namespace cbse {

namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(Trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

[[noreturn]] void LineError(int line, const std::string& what) {
  Fail(ErrorCode::kMalformedInput, "line " + std::to_string(line) + ": " + what);
}

std::vector<Rating> CanonicalOrder(std::vector<Rating> rows) {
  std::sort(rows.begin(), rows.end(), [](const Rating& a, const Rating& b) {
    return std::tie(a.subject, a.video) < std::tie(b.subject, b.video);
  });
  return rows;
}

double Mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

RatingsTable ParseRatingsCsv(std::istream& in) {
  RatingsTable table;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  std::set<std::pair<std::string, std::string>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitCsv(line);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"subject", "video", "reference", "score"}) {
        LineError(line_no, "expected header 'subject,video,reference,score'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 4) LineError(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
    Rating r{fields[0], fields[1], fields[2], 0.0};
    if (r.subject.empty() || r.video.empty() || r.reference.empty()) {
      LineError(line_no, "empty subject, video or reference");
    }
    const std::string& s = fields[3];
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), r.score);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(r.score)) {
      LineError(line_no, "score '" + s + "' is not a number");
    }
    if (r.score < 1.0 || r.score > 5.0) LineError(line_no, "score " + s + " outside [1, 5]");
    if (!seen.emplace(r.subject, r.video).second) {
      LineError(line_no, "duplicate rating of video " + r.video + " by subject " + r.subject);
    }
    table.rows.push_back(std::move(r));
  }
  if (!header_seen) Fail(ErrorCode::kMalformedInput, "ratings file is empty");
  return table;
}

RatingsTable ReadRatingsCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, path.string() + ": file not found");
  try {
    return ParseRatingsCsv(in);
  } catch (const Error& e) {
    Fail(e.code(), path.string() + ": " + e.what());
  }
}

ScreeningResult RejectOutlierSubjects(const RatingsTable& table, const ScreeningOptions& options) {
  const std::vector<Rating> rows = CanonicalOrder(table.rows);
  std::map<std::string, std::vector<const Rating*>> by_video;
  std::map<std::string, SubjectScreening> by_subject;
  for (const Rating& r : rows) {
    by_video[r.video].push_back(&r);
    by_subject[r.subject].subject = r.subject;
  }
  if (by_subject.size() < 3) {
    Fail(ErrorCode::kInvalidArgument, "screening needs at least 3 subjects, got " +
                                          std::to_string(by_subject.size()));
  }

  ScreeningResult result;
  for (const auto& [video, ratings] : by_video) {
    const double n = static_cast<double>(ratings.size());
    double mean = 0.0;
    for (const Rating* r : ratings) mean += r->score;
    mean /= n;
    double m2 = 0.0;
    double m4 = 0.0;
    for (const Rating* r : ratings) {
      const double d = r->score - mean;
      m2 += d * d;
      m4 += d * d * d * d;
    }
    const double stddev = ratings.size() > 1 ? std::sqrt(m2 / (n - 1.0)) : 0.0;
    m2 /= n;
    m4 /= n;
    const double kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
    const bool normal = kurtosis >= 2.0 && kurtosis <= 4.0;
    (normal ? result.normal_presentations : result.heavy_presentations)++;
    const double bound = (normal ? 2.0 : std::sqrt(20.0)) * stddev;
    for (const Rating* r : ratings) {
      SubjectScreening& s = by_subject[r->subject];
      ++s.presentations;
      if (r->score > mean + bound) ++s.high;
      if (r->score < mean - bound) ++s.low;
    }
  }

  std::set<std::string> rejected;
  for (auto& [id, s] : by_subject) {
    const int flagged = s.high + s.low;
    s.outlier_fraction = s.presentations ? static_cast<double>(flagged) / s.presentations : 0.0;
    s.imbalance = flagged ? std::abs(s.high - s.low) / static_cast<double>(flagged) : 0.0;
    const bool frequent = s.outlier_fraction > options.outlier_fraction;
    s.rejected_by_strict_rule = frequent && flagged > 0 && s.imbalance < 0.3;
    s.rejected = options.require_balanced ? s.rejected_by_strict_rule : frequent;
    if (s.rejected) rejected.insert(id);
    result.subjects.push_back(s);
  }
  result.rejected.assign(rejected.begin(), rejected.end());
  for (const Rating& r : table.rows) {
    if (!rejected.count(r.subject)) result.kept.rows.push_back(r);
  }
  return result;
}

DmosTable ComputeDmos(const RatingsTable& table) {
  const std::vector<Rating> rows = CanonicalOrder(table.rows);
  std::map<std::pair<std::string, std::string>, double> score_of;
  std::map<std::string, std::vector<const Rating*>> tests_by_subject;
  for (const Rating& r : rows) {
    score_of[{r.subject, r.video}] = r.score;
    if (!r.is_reference()) tests_by_subject[r.subject].push_back(&r);
  }

  DmosTable out;
  std::map<std::string, std::vector<double>> rescaled_by_video;
  for (const auto& [subject, tests] : tests_by_subject) {
    std::vector<double> deltas;
    deltas.reserve(tests.size());
    for (const Rating* r : tests) {
      const auto ref = score_of.find({subject, r->reference});
      if (ref == score_of.end()) {
        Fail(ErrorCode::kMalformedInput, "subject " + subject + " rated " + r->video +
                                             " but not its reference " + r->reference);
      }
      deltas.push_back(ref->second - r->score);
    }
    SubjectNormalization norm{subject, Mean(deltas), 0.0, static_cast<int>(deltas.size())};
    double ss = 0.0;
    for (double d : deltas) ss += (d - norm.mean) * (d - norm.mean);
    norm.stddev = deltas.size() > 1 ? std::sqrt(ss / (deltas.size() - 1.0)) : 0.0;
    if (!(norm.stddev > 0.0)) {
      out.rejected.push_back({subject, deltas.size() > 1
                                           ? "constant difference scores (sigma = 0)"
                                           : "fewer than 2 difference scores"});
      continue;
    }
    out.subjects.push_back(norm);
    for (std::size_t k = 0; k < tests.size(); ++k) {
      const double z = std::clamp((deltas[k] - norm.mean) / norm.stddev, -3.0, 3.0);
      const double scaled = RescaleNormalized(z);
      out.scores.push_back({subject, tests[k]->video, deltas[k], z, scaled});
      rescaled_by_video[tests[k]->video].push_back(scaled);
    }
  }
  for (const auto& [video, values] : rescaled_by_video) {
    out.entries.push_back({video, Mean(values), static_cast<int>(values.size())});
  }
  return out;
}

void WriteDmosCsv(std::ostream& out, const DmosTable& table) {
  out << "video,dmos,n_subjects\n";
  char buf[64];
  for (const auto& e : table.entries) {
    std::snprintf(buf, sizeof(buf), "%.12g", e.dmos);
    out << e.video << ',' << buf << ',' << e.n_subjects << '\n';
  }
}

}  // namespace cbse
