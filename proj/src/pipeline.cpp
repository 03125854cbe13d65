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

#include "cbse/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "cbse/image_ops.hpp"
#include "cbse/parallel.hpp"
#include "json.hpp"

namespace cbse {

namespace {

using nlohmann::json;

constexpr const char* kModelFormat = "cbse-pristine-model";
constexpr int kModelVersion = 1;

json ConfigJson(const PipelineConfig& c) {
  return json{
      {"block", {{"width", c.block_w}, {"height", c.block_h}}},
      {"steerable",
       {{"sigma", c.steerable.sigma},
        {"order", c.steerable.order},
        {"support", c.steerable.support},
        {"scales", c.steerable.scales},
        {"decimation_sigma", c.steerable.decimation_sigma},
        {"azimuths", std::vector<double>(kAzimuths.begin(), kAzimuths.end())},
        {"elevations", std::vector<double>(kElevations.begin(), kElevations.end())}}},
      {"disparity",
       {{"max_disparity", c.disparity.max_disparity}, {"window", c.disparity.window}}},
      {"saliency",
       {{"lattice_factor", c.saliency.lattice_factor},
        {"scales", c.saliency.scales},
        {"sigma_fraction", c.saliency.sigma_fraction},
        {"tolerance", c.saliency.tolerance},
        {"max_iterations", c.saliency.max_iterations}}},
      {"weight_window", c.weight_window},
      {"shrinkage", c.shrinkage},
  };
}

template <typename T>
void ReadField(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    Fail(ErrorCode::kMalformedInput, "config: bad value for " + where + key);
  }
}

void RejectUnknown(const json& obj, std::initializer_list<const char*> known,
                   const std::string& where) {
  if (!obj.is_object()) Fail(ErrorCode::kMalformedInput, "config: " + where + " must be an object");
  for (const auto& item : obj.items()) {
    if (std::none_of(known.begin(), known.end(),
                     [&](const char* k) { return item.key() == k; })) {
      Fail(ErrorCode::kMalformedInput, "config: unknown key " + where + item.key());
    }
  }
}

PipelineConfig ConfigFromJsonValue(const json& j) {
  PipelineConfig c;
  RejectUnknown(j, {"block", "steerable", "disparity", "saliency", "weight_window", "shrinkage"}, "");
  if (j.contains("block")) {
    const json& b = j["block"];
    RejectUnknown(b, {"width", "height"}, "block.");
    ReadField(b, "width", c.block_w, "block.");
    ReadField(b, "height", c.block_h, "block.");
  }
  if (j.contains("steerable")) {
    const json& s = j["steerable"];
    RejectUnknown(s, {"sigma", "order", "support", "scales", "decimation_sigma", "azimuths", "elevations"},
                  "steerable.");
    ReadField(s, "sigma", c.steerable.sigma, "steerable.");
    ReadField(s, "order", c.steerable.order, "steerable.");
    ReadField(s, "support", c.steerable.support, "steerable.");
    ReadField(s, "scales", c.steerable.scales, "steerable.");
    ReadField(s, "decimation_sigma", c.steerable.decimation_sigma, "steerable.");
    std::vector<double> az(kAzimuths.begin(), kAzimuths.end());
    std::vector<double> el(kElevations.begin(), kElevations.end());
    const auto az0 = az;
    const auto el0 = el;
    ReadField(s, "azimuths", az, "steerable.");
    ReadField(s, "elevations", el, "steerable.");
    if (az != az0 || el != el0) {
      Fail(ErrorCode::kConfigMismatch, "config: orientation lists differ from this build's");
    }
  }
  if (j.contains("disparity")) {
    const json& d = j["disparity"];
    RejectUnknown(d, {"max_disparity", "window"}, "disparity.");
    ReadField(d, "max_disparity", c.disparity.max_disparity, "disparity.");
    ReadField(d, "window", c.disparity.window, "disparity.");
  }
  if (j.contains("saliency")) {
    const json& s = j["saliency"];
    RejectUnknown(s, {"lattice_factor", "scales", "sigma_fraction", "tolerance", "max_iterations"},
                  "saliency.");
    ReadField(s, "lattice_factor", c.saliency.lattice_factor, "saliency.");
    ReadField(s, "scales", c.saliency.scales, "saliency.");
    ReadField(s, "sigma_fraction", c.saliency.sigma_fraction, "saliency.");
    ReadField(s, "tolerance", c.saliency.tolerance, "saliency.");
    ReadField(s, "max_iterations", c.saliency.max_iterations, "saliency.");
  }
  ReadField(j, "weight_window", c.weight_window, "");
  ReadField(j, "shrinkage", c.shrinkage, "");
  c.Validate();
  return c;
}

}  // namespace

std::string PipelineConfig::Mismatch(const PipelineConfig& o) const {
  if (block_w != o.block_w || block_h != o.block_h) return "block size";
  if (steerable.sigma != o.steerable.sigma) return "steerable.sigma";
  if (steerable.order != o.steerable.order) return "steerable.order";
  if (steerable.support != o.steerable.support) return "steerable.support";
  if (steerable.scales != o.steerable.scales) return "steerable.scales";
  if (steerable.decimation_sigma != o.steerable.decimation_sigma) return "steerable.decimation_sigma";
  if (disparity.max_disparity != o.disparity.max_disparity) return "disparity.max_disparity";
  if (disparity.window != o.disparity.window) return "disparity.window";
  if (saliency.lattice_factor != o.saliency.lattice_factor) return "saliency.lattice_factor";
  if (saliency.scales != o.saliency.scales) return "saliency.scales";
  if (saliency.sigma_fraction != o.saliency.sigma_fraction) return "saliency.sigma_fraction";
  if (saliency.tolerance != o.saliency.tolerance) return "saliency.tolerance";
  if (saliency.max_iterations != o.saliency.max_iterations) return "saliency.max_iterations";
  if (weight_window != o.weight_window) return "weight_window";
  if (shrinkage != o.shrinkage) return "shrinkage";
  return {};
}

void PipelineConfig::Validate() const {
  Require(block_w > 0 && block_h > 0, "config: block size must be positive");
  Require(steerable.sigma > 0.0, "config: steerable.sigma must be positive");
  Require(steerable.order >= 0, "config: steerable.order must be >= 0");
  Require(steerable.support >= 5 && steerable.support % 2 == 1,
          "config: steerable.support must be odd and >= 5");
  Require(steerable.scales >= 1, "config: steerable.scales must be >= 1");
  Require(steerable.decimation_sigma > 0.0, "config: steerable.decimation_sigma must be positive");
  Require(disparity.max_disparity >= 0, "config: disparity.max_disparity must be >= 0");
  Require(disparity.window >= 3 && disparity.window % 2 == 1,
          "config: disparity.window must be odd and >= 3");
  Require(saliency.lattice_factor >= 1 && saliency.scales >= 1,
          "config: saliency lattice_factor and scales must be >= 1");
  Require(saliency.sigma_fraction > 0.0 && saliency.tolerance > 0.0 && saliency.max_iterations > 0,
          "config: saliency sigma_fraction, tolerance and max_iterations must be positive");
  Require(weight_window >= 1 && weight_window % 2 == 1, "config: weight_window must be odd");
  Require(shrinkage >= 0.0, "config: shrinkage must be >= 0");
  Require(threads >= 1, "config: threads must be >= 1");
}

std::string ConfigToJson(const PipelineConfig& config) { return ConfigJson(config).dump(2); }

PipelineConfig ConfigFromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kMalformedInput, std::string("config: ") + e.what());
  }
  return ConfigFromJsonValue(j);
}

PipelineConfig LoadConfigFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, path.string() + ": file not found");
  std::stringstream ss;
  ss << in.rdbuf();
  return ConfigFromJson(ss.str());
}

CyclopeanVolume BuildCyclopeanVolume(const StereoSequence& video, const PipelineConfig& config,
                                     FusionStats* stats) {
  const int w = video.width();
  const int h = video.height();
  const int frames = video.frame_count();
  CyclopeanVolume volume(w, h, frames);
  std::vector<int> fallbacks(frames, 0);
  ParallelFor(frames, config.threads, [&](int t) {
    const PlaneD left = ToReal(video.left.frame(t));
    const PlaneD right = ToReal(video.right.frame(t));
    const DisparityMap d = ComputeDisparity(left, right, config.disparity);
    const SaliencyMap sl = ComputeSaliency(left, config.saliency);
    const SaliencyMap sr = ComputeSaliency(right, config.saliency);
    fallbacks[t] = (sl.uniform_fallback || sl.nonconverged ? 1 : 0) +
                   (sr.uniform_fallback || sr.nonconverged ? 1 : 0);
    const ViewWeights weights = ComputeWeights(sl.map, sr.map, d, config.weight_window);
    const PlaneD c = BuildCyclopean(left, right, d, weights);
    float* dst = &volume(0, 0, t);
    for (std::size_t i = 0; i < c.size(); ++i) dst[i] = static_cast<float>(c.data()[i]);
  });
  if (stats) stats->saliency_fallbacks = std::accumulate(fallbacks.begin(), fallbacks.end(), 0);
  return volume;
}

KernelBank MakeKernelBank(const PipelineConfig& config) {
  return KernelBank(MakeOrientations(), config.steerable);
}

FeatureMatrix ExtractVideoFeatures(const StereoSequence& video, const PipelineConfig& config,
                                   const KernelBank& bank, SourceTag tag) {
  const PatchGrid grid = PartitionPatches(video.width(), video.height(), config.block_w,
                                          config.block_h);
  const CyclopeanVolume volume = BuildCyclopeanVolume(video, config);
  return ExtractFeatures(volume, grid, bank, config.threads, tag);
}

PristineModel BuildPristineModel(const FeatureMatrix& stacked, const PipelineConfig& config) {
  // Canonical row order keeps the fit independent of corpus order.
  std::vector<int> order(stacked.rows);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::lexicographical_compare(stacked.row(a), stacked.row(a) + stacked.cols,
                                        stacked.row(b), stacked.row(b) + stacked.cols);
  });
  FeatureMatrix sorted;
  sorted.rows = stacked.rows;
  sorted.cols = stacked.cols;
  sorted.tag = SourceTag::kPristine;
  sorted.values.reserve(stacked.values.size());
  for (int r : order) sorted.values.insert(sorted.values.end(), stacked.row(r), stacked.row(r) + stacked.cols);
  sorted.degenerate.assign(sorted.rows, 0);
  return PristineModel{FitMvg(sorted, config.shrinkage), config};
}

PristineModel BuildPristineModel(const std::vector<StereoSequence>& corpus,
                                 const PipelineConfig& config) {
  if (corpus.empty()) Fail(ErrorCode::kEmptyCorpus, "pristine corpus is empty");
  config.Validate();
  const KernelBank bank = MakeKernelBank(config);
  std::vector<FeatureMatrix> parts;
  parts.reserve(corpus.size());
  for (const auto& video : corpus) {
    parts.push_back(ExtractVideoFeatures(video, config, bank, SourceTag::kPristine));
  }
  return BuildPristineModel(StackRows(parts, SourceTag::kPristine), config);
}

std::vector<CorpusEntry> ScanCorpus(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) Fail(ErrorCode::kIo, dir.string() + ": not a directory");
  std::map<std::string, CorpusEntry> entries;
  for (const auto& item : fs::directory_iterator(dir)) {
    if (!item.is_regular_file() || item.path().extension() != ".yuv") continue;
    const std::string stem = item.path().stem().string();
    const bool paired = stem.size() > 2 && (stem.ends_with("_L") || stem.ends_with("_R"));
    const std::string name = paired ? stem.substr(0, stem.size() - 2) : stem;
    CorpusEntry& e = entries[paired ? name + "/" : name];
    e.name = name;
    if (!paired || stem.ends_with("_L")) e.left = item.path();
    if (!paired || stem.ends_with("_R")) e.right = item.path();
  }
  std::vector<CorpusEntry> out;
  for (auto& [key, e] : entries) {
    if (e.left.empty() || e.right.empty()) {
      Fail(ErrorCode::kIo, (e.left.empty() ? e.right : e.left).string() + ": missing the other view");
    }
    out.push_back(std::move(e));
  }
  return out;
}

StereoSequence LoadStereo(const std::filesystem::path& left, const std::filesystem::path& right,
                          int width, int height) {
  FrameSequence l = ReadYuv420(left, width, height);
  FrameSequence r = left == right ? l : ReadYuv420(right, width, height);
  if (l.frame_count() != r.frame_count()) {
    Fail(ErrorCode::kIo, right.string() + ": frame count differs from " + left.string());
  }
  return StereoSequence(std::move(l), std::move(r));
}

PristineModel BuildPristineModel(const std::vector<CorpusEntry>& corpus, int width, int height,
                                 const PipelineConfig& config) {
  if (corpus.empty()) Fail(ErrorCode::kEmptyCorpus, "pristine corpus is empty");
  config.Validate();
  const KernelBank bank = MakeKernelBank(config);
  std::vector<FeatureMatrix> parts;
  parts.reserve(corpus.size());
  for (const auto& entry : corpus) {
    const StereoSequence video = LoadStereo(entry.left, entry.right, width, height);
    parts.push_back(ExtractVideoFeatures(video, config, bank, SourceTag::kPristine));
  }
  return BuildPristineModel(StackRows(parts, SourceTag::kPristine), config);
}

QualityScore ScoreVideo(const StereoSequence& test, const PristineModel& pristine,
                        const PipelineConfig& config) {
  config.Validate();
  if (const std::string field = pristine.config.Mismatch(config); !field.empty()) {
    Fail(ErrorCode::kConfigMismatch, "model was built with a different " + field);
  }
  const KernelBank bank = MakeKernelBank(config);
  const FeatureMatrix features = ExtractVideoFeatures(test, config, bank, SourceTag::kDistorted);
  if (features.cols != pristine.mvg.dimension) {
    Fail(ErrorCode::kConfigMismatch, "feature dimension differs from the model's");
  }
  const MvgModel test_model = FitMvg(features, config.shrinkage);
  return CompareModels(pristine.mvg, test_model);
}

void SaveModel(const std::filesystem::path& path, const PristineModel& model) {
  const MvgModel& m = model.mvg;
  json j = {
      {"format", kModelFormat},
      {"version", kModelVersion},
      {"dimension", m.dimension},
      {"sample_count", m.sample_count},
      {"shrinkage_lambda", m.shrinkage_lambda},
      {"degenerate", m.degenerate},
      {"config", ConfigJson(model.config)},
      {"mu", m.mu},
      {"sigma", m.sigma},
  };
  std::ofstream out(path);
  if (!out) Fail(ErrorCode::kIo, path.string() + ": cannot create");
  out << j.dump(1) << "\n";
  if (!out) Fail(ErrorCode::kIo, path.string() + ": write error");
}

PristineModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, path.string() + ": file not found");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kMalformedInput, path.string() + ": " + e.what());
  }
  if (!j.is_object() || j.value("format", "") != kModelFormat) {
    Fail(ErrorCode::kMalformedInput, path.string() + ": not a pristine model file");
  }
  if (j.value("version", 0) != kModelVersion) {
    Fail(ErrorCode::kConfigMismatch, path.string() + ": unsupported model version");
  }
  PristineModel model;
  try {
    model.config = ConfigFromJsonValue(j.at("config"));
    MvgModel& m = model.mvg;
    m.dimension = j.at("dimension").get<int>();
    m.sample_count = j.at("sample_count").get<int>();
    m.shrinkage_lambda = j.at("shrinkage_lambda").get<double>();
    m.degenerate = j.value("degenerate", false);
    m.mu = j.at("mu").get<std::vector<double>>();
    m.sigma = j.at("sigma").get<std::vector<double>>();
  } catch (const json::exception& e) {
    Fail(ErrorCode::kMalformedInput, path.string() + ": " + e.what());
  }
  const auto d = static_cast<std::size_t>(model.mvg.dimension);
  if (model.mvg.mu.size() != d || model.mvg.sigma.size() != d * d) {
    Fail(ErrorCode::kMalformedInput, path.string() + ": mu/sigma sizes disagree with dimension");
  }
  return model;
}

}  // namespace cbse
