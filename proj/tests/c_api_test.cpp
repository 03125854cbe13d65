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

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.hpp"

namespace {

using cbse::testing::TempDir;

constexpr const char* kSmallConfig =
    R"({"block": {"width": 48, "height": 48}, "disparity": {"max_disparity": 8}})";

class CApi : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::make_unique<TempDir>("capi");
    std::ofstream(*dir_ / "config.json") << kSmallConfig;
    ASSERT_EQ(cbse_config_load((*dir_ / "config.json").c_str(), &config_), CBSE_OK) << cbse_last_error();
    std::filesystem::create_directories(*dir_ / "corpus");
    for (std::uint32_t seed : {21u, 22u}) {
      const std::string stem = "c" + std::to_string(seed);
      cbse::testing::WriteStereo(cbse::testing::SyntheticStereo(96, 96, 10, seed, 3),
                                 dir_->path() / "corpus" / (stem + "_L.yuv"),
                                 dir_->path() / "corpus" / (stem + "_R.yuv"));
    }
    cbse::testing::WriteStereo(cbse::testing::SyntheticStereo(96, 96, 10, 77, 2), *dir_ / "t_L.yuv",
                               *dir_ / "t_R.yuv");
  }
  void TearDown() override { cbse_config_destroy(config_); }

  std::unique_ptr<TempDir> dir_;
  cbse_config* config_ = nullptr;
};

TEST_F(CApi, FitScoreAndRoundTrip) {
  cbse_model* model = nullptr;
  ASSERT_EQ(cbse_model_fit_dir((*dir_ / "corpus").c_str(), 96, 96, config_, &model), CBSE_OK)
      << cbse_last_error();
  EXPECT_EQ(cbse_model_rows(model), 2 * 4);
  EXPECT_EQ(cbse_model_dimension(model), 270);

  cbse_video* video = nullptr;
  ASSERT_EQ(cbse_video_load((*dir_ / "t_L.yuv").c_str(), (*dir_ / "t_R.yuv").c_str(), 96, 96, &video),
            CBSE_OK);
  EXPECT_EQ(cbse_video_frame_count(video), 10);
  cbse_score score{};
  ASSERT_EQ(cbse_score_video(model, video, config_, &score), CBSE_OK) << cbse_last_error();
  EXPECT_TRUE(std::isfinite(score.cbse));
  EXPECT_EQ(score.cbse, score.s_mu * score.s_sigma);

  ASSERT_EQ(cbse_model_save(model, (*dir_ / "m.json").c_str()), CBSE_OK);
  cbse_model* loaded = nullptr;
  ASSERT_EQ(cbse_model_load((*dir_ / "m.json").c_str(), &loaded), CBSE_OK);
  cbse_score again{};
  ASSERT_EQ(cbse_score_video(loaded, video, config_, &again), CBSE_OK);
  EXPECT_EQ(again.cbse, score.cbse);

  ASSERT_EQ(cbse_config_set_threads(config_, 3), CBSE_OK);
  ASSERT_EQ(cbse_score_video(loaded, video, config_, &again), CBSE_OK);
  EXPECT_EQ(again.cbse, score.cbse);

  cbse_video* fogged = nullptr;
  ASSERT_EQ(cbse_video_fog(video, 0.3, &fogged), CBSE_OK);
  ASSERT_EQ(cbse_score_video(loaded, fogged, config_, &again), CBSE_OK);
  EXPECT_NE(again.cbse, score.cbse);

  cbse_video_destroy(fogged);
  cbse_video_destroy(video);
  cbse_model_destroy(loaded);
  cbse_model_destroy(model);
}

TEST_F(CApi, FitFromVideosMatchesDirectory) {
  cbse_video* a = nullptr;
  cbse_video* b = nullptr;
  const auto corpus = *dir_ / "corpus";
  ASSERT_EQ(cbse_video_load((corpus / "c21_L.yuv").c_str(), (corpus / "c21_R.yuv").c_str(), 96, 96, &a),
            CBSE_OK);
  ASSERT_EQ(cbse_video_load((corpus / "c22_L.yuv").c_str(), (corpus / "c22_R.yuv").c_str(), 96, 96, &b),
            CBSE_OK);
  const cbse_video* videos[] = {a, b};
  cbse_model* from_videos = nullptr;
  cbse_model* from_dir = nullptr;
  ASSERT_EQ(cbse_model_fit_videos(videos, 2, config_, &from_videos), CBSE_OK);
  ASSERT_EQ(cbse_model_fit_dir(corpus.c_str(), 96, 96, config_, &from_dir), CBSE_OK);
  ASSERT_EQ(cbse_model_save(from_videos, (*dir_ / "a.json").c_str()), CBSE_OK);
  ASSERT_EQ(cbse_model_save(from_dir, (*dir_ / "b.json").c_str()), CBSE_OK);
  EXPECT_EQ(cbse::testing::ReadText(*dir_ / "a.json"), cbse::testing::ReadText(*dir_ / "b.json"));
  cbse_model_destroy(from_videos);
  cbse_model_destroy(from_dir);
  cbse_video_destroy(a);
  cbse_video_destroy(b);
}

TEST_F(CApi, ErrorCodes) {
  cbse_model* model = nullptr;
  std::filesystem::create_directories(*dir_ / "empty");
  EXPECT_EQ(cbse_model_fit_dir((*dir_ / "empty").c_str(), 96, 96, config_, &model), CBSE_ERR_EMPTY_CORPUS);
  EXPECT_EQ(model, nullptr);
  EXPECT_NE(std::string(cbse_last_error()), "");
  EXPECT_EQ(cbse_model_fit_dir((*dir_ / "corpus").c_str(), 90, 96, config_, &model), CBSE_ERR_IO);
  EXPECT_EQ(cbse_model_load((*dir_ / "nothing.json").c_str(), &model), CBSE_ERR_IO);

  cbse_video* video = nullptr;
  EXPECT_EQ(cbse_video_load(nullptr, nullptr, 96, 96, &video), CBSE_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(cbse_video_load((*dir_ / "t_L.yuv").c_str(), nullptr, 0, 96, &video), CBSE_ERR_INVALID_ARGUMENT);

  std::ofstream(*dir_ / "bad.json") << R"({"steerable": {"support": 7}, "oops": 1})";
  cbse_config* bad = nullptr;
  EXPECT_EQ(cbse_config_load((*dir_ / "bad.json").c_str(), &bad), CBSE_ERR_MALFORMED_INPUT);
  EXPECT_EQ(cbse_config_load((*dir_ / "nope.json").c_str(), &bad), CBSE_ERR_IO);
  EXPECT_EQ(cbse_config_set_threads(config_, 0), CBSE_ERR_INVALID_ARGUMENT);
}

TEST_F(CApi, ConfigMismatch) {
  cbse_model* model = nullptr;
  ASSERT_EQ(cbse_model_fit_dir((*dir_ / "corpus").c_str(), 96, 96, config_, &model), CBSE_OK);
  std::ofstream(*dir_ / "other.json")
      << R"({"block": {"width": 48, "height": 48}, "disparity": {"max_disparity": 8}, "steerable": {"support": 7}})";
  cbse_config* other = nullptr;
  ASSERT_EQ(cbse_config_load((*dir_ / "other.json").c_str(), &other), CBSE_OK);
  cbse_video* video = nullptr;
  ASSERT_EQ(cbse_video_load((*dir_ / "t_L.yuv").c_str(), (*dir_ / "t_R.yuv").c_str(), 96, 96, &video),
            CBSE_OK);
  cbse_score score{};
  EXPECT_EQ(cbse_score_video(model, video, other, &score), CBSE_ERR_CONFIG_MISMATCH);
  EXPECT_NE(std::string(cbse_last_error()).find("support"), std::string::npos);
  cbse_video_destroy(video);
  cbse_config_destroy(other);
  cbse_model_destroy(model);
}

TEST(CApiConfig, JsonIsParseable) {
  cbse_config* c = nullptr;
  ASSERT_EQ(cbse_config_create(&c), CBSE_OK);
  char* text = nullptr;
  ASSERT_EQ(cbse_config_to_json(c, &text), CBSE_OK);
  EXPECT_NE(std::string(text).find("\"support\": 9"), std::string::npos);
  cbse_free_string(text);
  cbse_config_destroy(c);
  EXPECT_STREQ(cbse_version(), "1.0.0");
}

TEST(CApiStats, SpearmanAndFTest) {
  const double x[] = {1, 2, 3, 4, 5};
  const double y[] = {2, 4, 8, 16, 32};
  double rho = 0.0;
  ASSERT_EQ(cbse_spearman(x, y, 5, &rho), CBSE_OK);
  EXPECT_EQ(rho, 1.0);
  EXPECT_EQ(cbse_spearman(x, y, 1, &rho), CBSE_ERR_INVALID_ARGUMENT);

  std::vector<double> r(20);
  for (int i = 0; i < 20; ++i) r[i] = std::sin(i * 1.7);
  double f = 0.0;
  cbse_f_verdict verdict = CBSE_F_FIRST_BETTER;
  ASSERT_EQ(cbse_f_test(r.data(), r.data(), r.size(), 0.05, &f, &verdict), CBSE_OK);
  EXPECT_EQ(f, 1.0);
  EXPECT_EQ(verdict, CBSE_F_INDISTINGUISHABLE);
}

TEST(CApiSubjective, DmosAndEval) {
  TempDir dir("capi_dmos");
  std::ofstream(dir / "r.csv") << "subject,video,reference,score\n"
                                  "a,R,R,5\na,V1,R,4\na,V2,R,2\n"
                                  "b,R,R,5\nb,V1,R,3\nb,V2,R,1\n"
                                  "c,R,R,4\nc,V1,R,3\nc,V2,R,3\n";
  char* diagnostics = nullptr;
  ASSERT_EQ(cbse_dmos_file((dir / "r.csv").c_str(), (dir / "d.csv").c_str(), &diagnostics), CBSE_OK)
      << cbse_last_error();
  EXPECT_NE(std::string(diagnostics).find("rejected subject c"), std::string::npos) << diagnostics;
  cbse_free_string(diagnostics);
  EXPECT_EQ(cbse::testing::ReadText(dir / "d.csv").rfind("video,dmos,n_subjects\n", 0), 0u);

  std::ofstream(dir / "bad.csv") << "subject,video,reference,score\na,R,R,five\n";
  EXPECT_EQ(cbse_dmos_file((dir / "bad.csv").c_str(), (dir / "d2.csv").c_str(), nullptr),
            CBSE_ERR_MALFORMED_INPUT);
  EXPECT_NE(std::string(cbse_last_error()).find("line 2"), std::string::npos);

  std::ofstream scores(dir / "s.csv"), dmos(dir / "dm.csv");
  scores << "video,score\n";
  dmos << "video,dmos\n";
  for (int i = 0; i < 12; ++i) {
    scores << "v" << i << "," << i * 0.5 << "\n";
    dmos << "v" << i << "," << 10 + i * i << "\n";
  }
  scores.close();
  dmos.close();
  cbse_metrics m{};
  ASSERT_EQ(cbse_eval_files((dir / "s.csv").c_str(), (dir / "dm.csv").c_str(), &m), CBSE_OK)
      << cbse_last_error();
  EXPECT_EQ(m.count, 12u);
  EXPECT_EQ(m.srocc, 1.0);
}

}  // namespace
