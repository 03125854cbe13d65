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

// Command-line front end. Talks to the library only through cbse.h.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cbse/cbse.h"

namespace {

struct ConfigDeleter {
  void operator()(cbse_config* c) const { cbse_config_destroy(c); }
};
struct VideoDeleter {
  void operator()(cbse_video* v) const { cbse_video_destroy(v); }
};
struct ModelDeleter {
  void operator()(cbse_model* m) const { cbse_model_destroy(m); }
};
using ConfigPtr = std::unique_ptr<cbse_config, ConfigDeleter>;
using VideoPtr = std::unique_ptr<cbse_video, VideoDeleter>;
using ModelPtr = std::unique_ptr<cbse_model, ModelDeleter>;

class Failure {
 public:
  explicit Failure(cbse_status status) : status_(status) {}
  cbse_status status() const { return status_; }

 private:
  cbse_status status_;
};

void Check(cbse_status status) {
  if (status != CBSE_OK) throw Failure(status);
}

int ExitCode(cbse_status status) {
  switch (status) {
    case CBSE_ERR_IO:
    case CBSE_ERR_EMPTY_CORPUS:
    case CBSE_ERR_CONFIG_MISMATCH:
    case CBSE_ERR_MALFORMED_INPUT:
      return static_cast<int>(status);
    default:
      return 1;
  }
}

struct VideoArgs {
  std::string left;
  std::string right;
  int width = 0;
  int height = 0;
};

struct CommonArgs {
  std::string config_path;
  int threads = 1;
};

void AddVideoOptions(CLI::App* cmd, VideoArgs& v, bool stereo) {
  if (stereo) {
    cmd->add_option("--left", v.left, "Left view (raw YUV 4:2:0)")->required();
    cmd->add_option("--right", v.right, "Right view; defaults to the left view");
  }
  cmd->add_option("--width", v.width, "Frame width in pixels")->required()->check(CLI::PositiveNumber);
  cmd->add_option("--height", v.height, "Frame height in pixels")->required()->check(CLI::PositiveNumber);
}

void AddCommonOptions(CLI::App* cmd, CommonArgs& c) {
  cmd->add_option("--config", c.config_path, "JSON pipeline configuration");
  cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1, 1024));
}

ConfigPtr MakeConfig(const CommonArgs& c) {
  cbse_config* raw = nullptr;
  Check(c.config_path.empty() ? cbse_config_create(&raw) : cbse_config_load(c.config_path.c_str(), &raw));
  ConfigPtr config(raw);
  Check(cbse_config_set_threads(config.get(), c.threads));
  return config;
}

VideoPtr LoadVideo(const VideoArgs& v) {
  cbse_video* raw = nullptr;
  Check(cbse_video_load(v.left.c_str(), v.right.empty() ? nullptr : v.right.c_str(), v.width,
                        v.height, &raw));
  return VideoPtr(raw);
}

ModelPtr LoadModel(const std::string& path) {
  cbse_model* raw = nullptr;
  Check(cbse_model_load(path.c_str(), &raw));
  return ModelPtr(raw);
}

cbse_score Score(const cbse_model* model, const cbse_video* video, const cbse_config* config) {
  cbse_score s{};
  Check(cbse_score_video(model, video, config, &s));
  return s;
}

void PrintScore(const cbse_score& s) {
  std::printf("S_mu=%.17g S_sigma=%.17g CBSE=%.17g\n", s.s_mu, s.s_sigma, s.cbse);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"No-reference quality assessment for stereoscopic video"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cbse_version()));

  VideoArgs video;
  CommonArgs common;
  std::string corpus_dir, model_path, ratings_path, out_path, scores_path, dmos_path;

  CLI::App* fit = app.add_subcommand("fit", "Build a pristine model from a corpus directory");
  fit->add_option("--corpus", corpus_dir, "Directory of .yuv files")->required();
  fit->add_option("--out", out_path, "Model file to write")->required();
  AddVideoOptions(fit, video, false);
  AddCommonOptions(fit, common);

  CLI::App* score = app.add_subcommand("score", "Score a stereo video against a pristine model");
  AddVideoOptions(score, video, true);
  score->add_option("--model", model_path, "Pristine model file")->required();
  AddCommonOptions(score, common);

  CLI::App* dmos = app.add_subcommand("dmos", "Screen subjects and compute DMOS");
  dmos->add_option("--ratings", ratings_path, "subject,video,reference,score CSV")->required();
  dmos->add_option("--out", out_path, "DMOS CSV to write")->required();

  CLI::App* eval = app.add_subcommand("eval", "Logistic fit and LCC/SROCC/RMSE");
  eval->add_option("--scores", scores_path, "video,score CSV")->required();
  eval->add_option("--dmos", dmos_path, "video,dmos CSV")->required();

  CLI::App* selfcheck = app.add_subcommand("selfcheck", "Synthetic fog ladder monotonicity check");
  AddVideoOptions(selfcheck, video, true);
  selfcheck->add_option("--model", model_path, "Pristine model file")->required();
  AddCommonOptions(selfcheck, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) {
      const ConfigPtr config = MakeConfig(common);
      const auto start = std::chrono::steady_clock::now();
      cbse_model* raw = nullptr;
      Check(cbse_model_fit_dir(corpus_dir.c_str(), video.width, video.height, config.get(), &raw));
      const ModelPtr model(raw);
      Check(cbse_model_save(model.get(), out_path.c_str()));
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::printf("rows=%ld dimension=%d seconds=%.2f\n", cbse_model_rows(model.get()),
                  cbse_model_dimension(model.get()), seconds);
    } else if (score->parsed()) {
      const ConfigPtr config = MakeConfig(common);
      const ModelPtr model = LoadModel(model_path);
      const VideoPtr clip = LoadVideo(video);
      PrintScore(Score(model.get(), clip.get(), config.get()));
    } else if (dmos->parsed()) {
      char* diagnostics = nullptr;
      const cbse_status status = cbse_dmos_file(ratings_path.c_str(), out_path.c_str(), &diagnostics);
      if (diagnostics) {
        std::fputs(diagnostics, stdout);
        cbse_free_string(diagnostics);
      }
      Check(status);
    } else if (eval->parsed()) {
      cbse_metrics m{};
      Check(cbse_eval_files(scores_path.c_str(), dmos_path.c_str(), &m));
      std::printf("n=%zu LCC=%.3f SROCC=%.3f RMSE=%.3f\n", m.count, m.lcc, m.srocc, m.rmse);
      std::printf("logistic z1=%.9g z2=%.9g z3=%.9g z4=%.9g\n", m.logistic[0], m.logistic[1],
                  m.logistic[2], m.logistic[3]);
    } else if (selfcheck->parsed()) {
      const ConfigPtr config = MakeConfig(common);
      const ModelPtr model = LoadModel(model_path);
      const VideoPtr clip = LoadVideo(video);
      const std::vector<double> ladder = {0.1, 0.2, 0.3, 0.4, 0.5};
      std::vector<double> scores;
      for (double t : ladder) {
        cbse_video* raw = nullptr;
        Check(cbse_video_fog(clip.get(), t, &raw));
        const VideoPtr fogged(raw);
        const cbse_score s = Score(model.get(), fogged.get(), config.get());
        std::printf("t=%.1f CBSE=%.17g\n", t, s.cbse);
        std::fflush(stdout);
        scores.push_back(s.cbse);
      }
      double rho = 0.0;
      Check(cbse_spearman(ladder.data(), scores.data(), ladder.size(), &rho));
      const bool pass = std::abs(rho) >= 0.9;
      std::printf("spearman=%.3f %s\n", rho, pass ? "PASS" : "FAIL");
      return pass ? 0 : 1;
    }
  } catch (const Failure& f) {
    std::fflush(stdout);
    std::fprintf(stderr, "error: %s\n", cbse_last_error());
    return ExitCode(f.status());
  }
  return 0;
}
