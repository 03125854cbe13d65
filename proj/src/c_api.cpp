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

#include "cbse/cbse.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "cbse/error.hpp"
#include "cbse/evaluation.hpp"
#include "cbse/pipeline.hpp"
#include "cbse/subjective.hpp"

struct cbse_config {
  cbse::PipelineConfig value;
};

struct cbse_video {
  cbse::StereoSequence value;
};

struct cbse_model {
  cbse::PristineModel value;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
cbse_status Guard(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return CBSE_OK;
  } catch (const cbse::Error& e) {
    g_last_error = e.what();
    return static_cast<cbse_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CBSE_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CBSE_ERR_INTERNAL;
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const cbse::PipelineConfig& ConfigOrDefault(const cbse_config* config) {
  static const cbse::PipelineConfig kDefault;
  return config ? config->value : kDefault;
}

void NeedPointer(const void* p, const char* what) {
  cbse::Require(p != nullptr, std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* cbse_last_error(void) { return g_last_error.c_str(); }

const char* cbse_version(void) { return "1.0.0"; }

void cbse_free_string(char* s) { std::free(s); }

cbse_status cbse_config_create(cbse_config** out) {
  return Guard([&] {
    NeedPointer(out, "out");
    *out = new cbse_config{};
  });
}

cbse_status cbse_config_load(const char* path, cbse_config** out) {
  return Guard([&] {
    NeedPointer(path, "path");
    NeedPointer(out, "out");
    *out = new cbse_config{cbse::LoadConfigFile(path)};
  });
}

cbse_status cbse_config_set_threads(cbse_config* config, int threads) {
  return Guard([&] {
    NeedPointer(config, "config");
    cbse::Require(threads >= 1, "threads must be >= 1");
    config->value.threads = threads;
  });
}

cbse_status cbse_config_to_json(const cbse_config* config, char** out) {
  return Guard([&] {
    NeedPointer(out, "out");
    *out = CopyString(cbse::ConfigToJson(ConfigOrDefault(config)));
  });
}

void cbse_config_destroy(cbse_config* config) { delete config; }

cbse_status cbse_video_load(const char* left_path, const char* right_path, int width, int height,
                            cbse_video** out) {
  return Guard([&] {
    NeedPointer(left_path, "left_path");
    NeedPointer(out, "out");
    *out = new cbse_video{
        cbse::LoadStereo(left_path, right_path ? right_path : left_path, width, height)};
  });
}

cbse_status cbse_video_fog(const cbse_video* video, double t, cbse_video** out) {
  return Guard([&] {
    NeedPointer(video, "video");
    NeedPointer(out, "out");
    *out = new cbse_video{cbse::ApplySyntheticFog(video->value, t)};
  });
}

int cbse_video_frame_count(const cbse_video* video) {
  return video ? video->value.frame_count() : 0;
}

void cbse_video_destroy(cbse_video* video) { delete video; }

cbse_status cbse_model_fit_dir(const char* corpus_dir, int width, int height,
                               const cbse_config* config, cbse_model** out) {
  return Guard([&] {
    NeedPointer(corpus_dir, "corpus_dir");
    NeedPointer(out, "out");
    const auto corpus = cbse::ScanCorpus(corpus_dir);
    *out = new cbse_model{cbse::BuildPristineModel(corpus, width, height, ConfigOrDefault(config))};
  });
}

cbse_status cbse_model_fit_videos(const cbse_video* const* videos, size_t count,
                                  const cbse_config* config, cbse_model** out) {
  return Guard([&] {
    NeedPointer(out, "out");
    if (count == 0) cbse::Fail(cbse::ErrorCode::kEmptyCorpus, "pristine corpus is empty");
    NeedPointer(videos, "videos");
    const cbse::PipelineConfig& cfg = ConfigOrDefault(config);
    cfg.Validate();
    const cbse::KernelBank bank = cbse::MakeKernelBank(cfg);
    std::vector<cbse::FeatureMatrix> parts;
    for (size_t i = 0; i < count; ++i) {
      NeedPointer(videos[i], "videos[i]");
      parts.push_back(
          cbse::ExtractVideoFeatures(videos[i]->value, cfg, bank, cbse::SourceTag::kPristine));
    }
    *out = new cbse_model{
        cbse::BuildPristineModel(cbse::StackRows(parts, cbse::SourceTag::kPristine), cfg)};
  });
}

cbse_status cbse_model_save(const cbse_model* model, const char* path) {
  return Guard([&] {
    NeedPointer(model, "model");
    NeedPointer(path, "path");
    cbse::SaveModel(path, model->value);
  });
}

cbse_status cbse_model_load(const char* path, cbse_model** out) {
  return Guard([&] {
    NeedPointer(path, "path");
    NeedPointer(out, "out");
    *out = new cbse_model{cbse::LoadModel(path)};
  });
}

long cbse_model_rows(const cbse_model* model) {
  return model ? static_cast<long>(model->value.mvg.sample_count) : 0;
}

int cbse_model_dimension(const cbse_model* model) {
  return model ? model->value.mvg.dimension : 0;
}

void cbse_model_destroy(cbse_model* model) { delete model; }

cbse_status cbse_score_video(const cbse_model* model, const cbse_video* video,
                             const cbse_config* config, cbse_score* out) {
  return Guard([&] {
    NeedPointer(model, "model");
    NeedPointer(video, "video");
    NeedPointer(out, "out");
    const cbse::QualityScore q =
        cbse::ScoreVideo(video->value, model->value, ConfigOrDefault(config));
    *out = cbse_score{q.s_mu, q.s_sigma, q.cbse, q.sigma_flagged ? 1 : 0};
  });
}

cbse_status cbse_dmos_file(const char* ratings_path, const char* out_path, char** diagnostics) {
  return Guard([&] {
    NeedPointer(ratings_path, "ratings_path");
    NeedPointer(out_path, "out_path");
    if (diagnostics) *diagnostics = nullptr;
    const cbse::RatingsTable table = cbse::ReadRatingsCsv(ratings_path);
    const cbse::ScreeningResult screened = cbse::RejectOutlierSubjects(table);
    const cbse::DmosTable dmos = cbse::ComputeDmos(screened.kept);
    std::ofstream out(out_path);
    if (!out) cbse::Fail(cbse::ErrorCode::kIo, std::string(out_path) + ": cannot write");
    cbse::WriteDmosCsv(out, dmos);
    if (!out) cbse::Fail(cbse::ErrorCode::kIo, std::string(out_path) + ": write failed");
    if (diagnostics) {
      std::ostringstream msg;
      for (const auto& s : screened.subjects) {
        if (s.rejected) {
          msg << "rejected subject " << s.subject << ": outlier fraction " << s.outlier_fraction
              << " (P=" << s.high << ", Q=" << s.low << ")\n";
        }
      }
      for (const auto& r : dmos.rejected) msg << "rejected subject " << r.subject << ": " << r.reason << '\n';
      *diagnostics = CopyString(msg.str());
    }
  });
}

cbse_status cbse_eval_files(const char* scores_path, const char* dmos_path, cbse_metrics* out) {
  return Guard([&] {
    NeedPointer(scores_path, "scores_path");
    NeedPointer(dmos_path, "dmos_path");
    NeedPointer(out, "out");
    const auto scores = cbse::ReadNamedValuesCsv(scores_path, "score");
    const auto dmos = cbse::ReadNamedValuesCsv(dmos_path, "dmos");
    const cbse::PairedSamples paired = cbse::JoinByVideo(scores, dmos);
    const cbse::MetricsReport r = cbse::Evaluate(paired.scores, paired.subjective);
    *out = cbse_metrics{r.lcc, r.srocc, r.rmse,
                        {r.logistic.z1, r.logistic.z2, r.logistic.z3, r.logistic.z4},
                        paired.videos.size()};
  });
}

cbse_status cbse_spearman(const double* x, const double* y, size_t n, double* out) {
  return Guard([&] {
    NeedPointer(x, "x");
    NeedPointer(y, "y");
    NeedPointer(out, "out");
    *out = cbse::Spearman({x, n}, {y, n});
  });
}

cbse_status cbse_f_test(const double* residuals_first, const double* residuals_second, size_t n,
                        double alpha, double* f, cbse_f_verdict* verdict) {
  return Guard([&] {
    NeedPointer(residuals_first, "residuals_first");
    NeedPointer(residuals_second, "residuals_second");
    const cbse::FTestResult r = cbse::FTest({residuals_first, n}, {residuals_second, n}, alpha);
    if (f) *f = r.f;
    if (verdict) *verdict = static_cast<cbse_f_verdict>(r.verdict);
  });
}

}  // extern "C"
