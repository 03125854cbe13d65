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

#ifndef CBSE_SUBJECTIVE_HPP_
#define CBSE_SUBJECTIVE_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cbse {

// One ACR rating (1..5). Reference presentations have video == reference.
struct Rating {
  std::string subject;
  std::string video;
  std::string reference;
  double score = 0.0;

  bool is_reference() const { return video == reference; }
};

struct RatingsTable {
  std::vector<Rating> rows;
};

// Header `subject,video,reference,score`. Throws Error(kMalformedInput) naming
// the offending line.
RatingsTable ParseRatingsCsv(std::istream& in);
RatingsTable ReadRatingsCsv(const std::filesystem::path& path);

struct SubjectScreening {
  std::string subject;
  int high = 0;       // P: ratings above the per-presentation upper bound
  int low = 0;        // Q: ratings below the lower bound
  int presentations = 0;
  double outlier_fraction = 0.0;  // (P + Q) / presentations
  double imbalance = 0.0;         // |P - Q| / (P + Q), 0 when P + Q == 0
  bool rejected = false;
  bool rejected_by_strict_rule = false;  // fraction and |P-Q|/(P+Q) < 0.3
};

struct ScreeningOptions {
  double outlier_fraction = 0.05;
  // Also require the balanced-outlier test (|P - Q| / (P + Q) < 0.3) before
  // rejecting. Off by default: it never rejects one-sided (biased) raters.
  bool require_balanced = false;
};

struct ScreeningResult {
  RatingsTable kept;
  std::vector<SubjectScreening> subjects;  // sorted by subject id
  std::vector<std::string> rejected;
  int normal_presentations = 0;  // kurtosis in [2, 4]: 2 sigma bound
  int heavy_presentations = 0;   // otherwise: sqrt(20) sigma bound
};

// BT.500-style observer screening over every presentation (video id). Needs
// at least 3 subjects.
ScreeningResult RejectOutlierSubjects(const RatingsTable& table,
                                      const ScreeningOptions& options = {});

struct SubjectNormalization {
  std::string subject;
  double mean = 0.0;
  double stddev = 0.0;  // n - 1 denominator
  int count = 0;
};

struct NormalizedScore {
  std::string subject;
  std::string video;
  double delta = 0.0;     // V_ref - V_dist
  double z = 0.0;         // (delta - mean) / stddev, clipped to [-3, 3]
  double rescaled = 0.0;  // (z + 3) * 100 / 6
};

struct DmosEntry {
  std::string video;
  double dmos = 0.0;
  int n_subjects = 0;
};

struct RejectedSubject {
  std::string subject;
  std::string reason;
};

struct DmosTable {
  std::vector<DmosEntry> entries;  // sorted by video id
  std::vector<NormalizedScore> scores;
  std::vector<SubjectNormalization> subjects;
  std::vector<RejectedSubject> rejected;
};

inline double RescaleNormalized(double z) { return (z + 3.0) * 100.0 / 6.0; }
inline double InverseRescale(double n) { return n * 6.0 / 100.0 - 3.0; }

// Difference scores against each subject's own reference rating, per-subject
// z-normalization, rescaling to [0, 100] and averaging over subjects.
// Subjects with constant differences are rejected with a diagnostic.
DmosTable ComputeDmos(const RatingsTable& table);

// `video,dmos,n_subjects`
void WriteDmosCsv(std::ostream& out, const DmosTable& table);

}  // namespace cbse

#endif  // CBSE_SUBJECTIVE_HPP_
