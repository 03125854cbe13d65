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

#ifndef CBSE_PIPELINE_HPP_
#define CBSE_PIPELINE_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "cbse/cyclopean.hpp"
#include "cbse/disparity.hpp"
#include "cbse/nss_features.hpp"
#include "cbse/quality_model.hpp"
#include "cbse/saliency.hpp"
#include "cbse/steerable.hpp"
#include "cbse/video_io.hpp"

namespace cbse {

// Every tunable of the pipeline. All fields except `threads` are written into
// pristine model files and must match at scoring time.
struct PipelineConfig {
  int block_w = 120;
  int block_h = 120;
  SteerableParams steerable;
  DisparityOptions disparity;
  SaliencyOptions saliency;
  int weight_window = 17;
  double shrinkage = kDefaultShrinkage;
  int threads = 1;

  // Empty when compatible, otherwise the first differing field.
  std::string Mismatch(const PipelineConfig& other) const;
  void Validate() const;
};

// Structured-text (JSON) form of the config, without `threads`.
std::string ConfigToJson(const PipelineConfig& config);
// Missing keys keep their defaults; unknown keys are rejected.
PipelineConfig ConfigFromJson(const std::string& json);
PipelineConfig LoadConfigFile(const std::filesystem::path& path);

struct FusionStats {
  int saliency_fallbacks = 0;  // frames whose saliency fell back to uniform
};

// Disparity, saliency and cyclopean fusion for every frame.
CyclopeanVolume BuildCyclopeanVolume(const StereoSequence& video, const PipelineConfig& config,
                                     FusionStats* stats = nullptr);

// Full per-video path: fusion, patching, decomposition, UGGD fits.
FeatureMatrix ExtractVideoFeatures(const StereoSequence& video, const PipelineConfig& config,
                                   const KernelBank& bank, SourceTag tag);

KernelBank MakeKernelBank(const PipelineConfig& config);

struct PristineModel {
  MvgModel mvg;
  PipelineConfig config;
};

// Features of every corpus video stacked (rows put into a canonical order, so
// the model does not depend on corpus order) and fit with one MVG.
PristineModel BuildPristineModel(const std::vector<StereoSequence>& corpus,
                                 const PipelineConfig& config);
PristineModel BuildPristineModel(const FeatureMatrix& stacked, const PipelineConfig& config);

struct CorpusEntry {
  std::string name;
  std::filesystem::path left;
  std::filesystem::path right;
};

// Every `.yuv` in `dir`, sorted by name. `<stem>_L.yuv` and `<stem>_R.yuv`
// form one stereo pair; any other file is used for both views.
std::vector<CorpusEntry> ScanCorpus(const std::filesystem::path& dir);

// Decodes and extracts one video at a time, so only features stay resident.
PristineModel BuildPristineModel(const std::vector<CorpusEntry>& corpus, int width, int height,
                                 const PipelineConfig& config);

StereoSequence LoadStereo(const std::filesystem::path& left, const std::filesystem::path& right,
                          int width, int height);

QualityScore ScoreVideo(const StereoSequence& test, const PristineModel& pristine,
                        const PipelineConfig& config);

// Versioned JSON: dimensions, mu, row-major sigma, sample_count,
// shrinkage_lambda and the pipeline parameter block.
void SaveModel(const std::filesystem::path& path, const PristineModel& model);
PristineModel LoadModel(const std::filesystem::path& path);

}  // namespace cbse

#endif  // CBSE_PIPELINE_HPP_
