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

#ifndef CBSE_CBSE_H_
#define CBSE_CBSE_H_

#include <stddef.h>

#if defined(_WIN32)
#if defined(CBSE_BUILDING_LIBRARY)
#define CBSE_API __declspec(dllexport)
#else
#define CBSE_API __declspec(dllimport)
#endif
#else
#define CBSE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cbse_status {
  CBSE_OK = 0,
  CBSE_ERR_INVALID_ARGUMENT = 1,
  CBSE_ERR_IO = 2,
  CBSE_ERR_EMPTY_CORPUS = 3,
  CBSE_ERR_CONFIG_MISMATCH = 4,
  CBSE_ERR_MALFORMED_INPUT = 5,
  CBSE_ERR_DEGENERATE = 6,
  CBSE_ERR_INTERNAL = 7
} cbse_status;

typedef struct cbse_config cbse_config;
typedef struct cbse_video cbse_video;
typedef struct cbse_model cbse_model;

typedef struct cbse_score {
  double s_mu;
  double s_sigma;
  double cbse;
  int sigma_flagged;
} cbse_score;

typedef struct cbse_metrics {
  double lcc;
  double srocc;
  double rmse;
  double logistic[4];
  size_t count;
} cbse_metrics;

typedef enum cbse_f_verdict {
  CBSE_F_FIRST_BETTER = 0,
  CBSE_F_SECOND_BETTER = 1,
  CBSE_F_INDISTINGUISHABLE = 2
} cbse_f_verdict;

/* Message of the last failure on the calling thread ("" if none). */
CBSE_API const char* cbse_last_error(void);
CBSE_API const char* cbse_version(void);
/* Releases strings returned through `char**` out-parameters. */
CBSE_API void cbse_free_string(char* s);

CBSE_API cbse_status cbse_config_create(cbse_config** out);
/* JSON object; missing keys keep their defaults. */
CBSE_API cbse_status cbse_config_load(const char* path, cbse_config** out);
CBSE_API cbse_status cbse_config_set_threads(cbse_config* config, int threads);
CBSE_API cbse_status cbse_config_to_json(const cbse_config* config, char** out);
CBSE_API void cbse_config_destroy(cbse_config* config);

/* Raw YUV 4:2:0. `right_path` may be NULL for a 2D clip viewed twice. */
CBSE_API cbse_status cbse_video_load(const char* left_path, const char* right_path, int width,
                                     int height, cbse_video** out);
CBSE_API cbse_status cbse_video_fog(const cbse_video* video, double t, cbse_video** out);
CBSE_API int cbse_video_frame_count(const cbse_video* video);
CBSE_API void cbse_video_destroy(cbse_video* video);

/* Pristine model from every `.yuv` in a directory (`<stem>_L/_R.yuv` pairs). */
CBSE_API cbse_status cbse_model_fit_dir(const char* corpus_dir, int width, int height,
                                        const cbse_config* config, cbse_model** out);
CBSE_API cbse_status cbse_model_fit_videos(const cbse_video* const* videos, size_t count,
                                           const cbse_config* config, cbse_model** out);
CBSE_API cbse_status cbse_model_save(const cbse_model* model, const char* path);
CBSE_API cbse_status cbse_model_load(const char* path, cbse_model** out);
CBSE_API long cbse_model_rows(const cbse_model* model);
CBSE_API int cbse_model_dimension(const cbse_model* model);
CBSE_API void cbse_model_destroy(cbse_model* model);

/* CBSE_ERR_CONFIG_MISMATCH when `config` differs from the model's. */
CBSE_API cbse_status cbse_score_video(const cbse_model* model, const cbse_video* video,
                                      const cbse_config* config, cbse_score* out);

/* Screens subjects, computes DMOS, writes `video,dmos,n_subjects` to
 * `out_path`. `diagnostics` (may be NULL) lists rejected subjects. */
CBSE_API cbse_status cbse_dmos_file(const char* ratings_path, const char* out_path,
                                    char** diagnostics);

/* Joins `video,score` with `video,dmos` and reports fitted metrics. */
CBSE_API cbse_status cbse_eval_files(const char* scores_path, const char* dmos_path,
                                     cbse_metrics* out);

CBSE_API cbse_status cbse_spearman(const double* x, const double* y, size_t n, double* out);
CBSE_API cbse_status cbse_f_test(const double* residuals_first, const double* residuals_second,
                                 size_t n, double alpha, double* f, cbse_f_verdict* verdict);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // CBSE_CBSE_H_
