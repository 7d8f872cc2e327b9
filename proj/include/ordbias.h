/* Copyright 2026 the ordbias authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the ordinal aspect-bias inference engine. All functions
 * return ob_status; OB_OK is zero. Objects are opaque handles released with
 * their matching _free function. ob_last_error() describes the most recent
 * failure on the calling thread.
 */
#ifndef ORDBIAS_H
#define ORDBIAS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ob_status {
  OB_OK = 0,
  OB_ERROR_INVALID_ARGUMENT = 1,
  OB_ERROR_PARSE = 2,
  OB_ERROR_DUPLICATE_PAIR = 3,
  OB_ERROR_RATING_OUT_OF_RANGE = 4,
  OB_ERROR_INCONSISTENT_ASPECTS = 5,
  OB_ERROR_TOO_FEW_OBSERVATIONS = 6,
  OB_ERROR_UNKNOWN_USER = 7,
  OB_ERROR_UNKNOWN_ITEM = 8,
  OB_ERROR_IO = 9,
  OB_ERROR_NUMERICAL = 10,
  OB_ERROR_INTERNAL = 11
} ob_status;

typedef enum ob_model_kind {
  OB_MODEL_FULL = 0,
  OB_MODEL_CONTINUOUS_BIAS = 1,
  OB_MODEL_ORDINAL_NO_BIAS = 2,
  OB_MODEL_CONTINUOUS_NO_BIAS = 3,
  OB_MODEL_ORDINAL_GLOBAL = 4,
  OB_MODEL_CONTINUOUS_GLOBAL = 5
} ob_model_kind;

typedef struct ob_dataset ob_dataset;
typedef struct ob_model ob_model;
typedef struct ob_report ob_report;

const char* ob_version(void);
const char* ob_build_stamp(void);
const char* ob_last_error(void);
void ob_set_num_threads(int threads);

/* ---- datasets ---------------------------------------------------------- */

ob_status ob_dataset_read(const char* path, int32_t num_levels, char delimiter,
                          ob_dataset** out);
/* ratings is row-major, num_rows x num_aspects, values in 1..num_levels. */
ob_status ob_dataset_from_rows(const char* const* user_ids, const char* const* item_ids,
                               const int32_t* ratings, int64_t num_rows, int32_t num_aspects,
                               const char* const* aspect_names /* may be NULL */,
                               int32_t num_levels, ob_dataset** out);
ob_status ob_dataset_write(const ob_dataset* data, const char* path, char delimiter);
void ob_dataset_free(ob_dataset* data);

int32_t ob_dataset_num_users(const ob_dataset* data);
int32_t ob_dataset_num_items(const ob_dataset* data);
int32_t ob_dataset_num_aspects(const ob_dataset* data);
int32_t ob_dataset_num_levels(const ob_dataset* data);
int64_t ob_dataset_num_observations(const ob_dataset* data);
uint64_t ob_dataset_content_hash(const ob_dataset* data);

/* ---- simulation -------------------------------------------------------- */

typedef struct ob_sim_options {
  int32_t num_users;
  int32_t num_items;
  int32_t num_aspects;
  int32_t num_levels;
  int32_t num_groups;
  double density;        /* fraction of (user, item) pairs observed */
  double bias_scale;     /* group bias prior sd; Lambda = bias_scale^2 I */
  uint64_t seed;
  int32_t power_law_users;
} ob_sim_options;

void ob_sim_options_init(ob_sim_options* options);
/* truth_path, when non-NULL, receives the simulated latent state as TSV. */
ob_status ob_simulate(const ob_sim_options* options, const char* truth_path, ob_dataset** out);

/* ---- fitting ----------------------------------------------------------- */

typedef struct ob_fit_options {
  int32_t model_kind;       /* ob_model_kind */
  int32_t num_groups;       /* group count G; <= 0 selects the default (10) */
  uint64_t seed;
  int32_t burn_in;
  int32_t num_samples;
  int32_t thinning;
  int32_t parallel;         /* parallel block updates; same draws either way */
  double bias_prior_scale;  /* Lambda = s^2 I, default 1.0 */
  double response_scale;    /* B = s^2 I, default 0.5 */
} ob_fit_options;

void ob_fit_options_init(ob_fit_options* options);
uint64_t ob_fit_options_hash(const ob_fit_options* options);
ob_status ob_fit(const ob_dataset* data, const ob_fit_options* options, ob_model** out);

/* ---- models ------------------------------------------------------------ */

ob_status ob_model_save(const ob_model* model, const char* path);
ob_status ob_model_load(const char* path, ob_model** out);
void ob_model_free(ob_model* model);

int32_t ob_model_num_aspects(const ob_model* model);
int32_t ob_model_num_groups(const ob_model* model);
int32_t ob_model_num_samples(const ob_model* model);
int32_t ob_model_num_levels(const ob_model* model);
ob_status ob_model_aspect_name(const ob_model* model, int32_t aspect, char* buffer,
                               size_t buffer_size);

/* out_ratings must hold num_aspects doubles. strict != 0 rejects unknown
 * ids; otherwise unknown entities fall back to population-level estimates. */
ob_status ob_model_predict(const ob_model* model, const char* user_id, const char* item_id,
                           int32_t strict, int32_t plug_in, double* out_ratings);
ob_status ob_model_user_group(const ob_model* model, const char* user_id, int32_t* out_group);
/* out must hold num_groups * num_aspects doubles, row-major by group. */
ob_status ob_model_group_bias(const ob_model* model, double* out);
/* out_labels must hold num_aspects ints; entries are -1, 0 or +1. */
ob_status ob_model_bias_labels(const ob_model* model, const char* user_id, double threshold,
                               int32_t* out_labels);
ob_status ob_model_write_fit_log(const ob_model* model, const char* path);

/* ---- evaluation -------------------------------------------------------- */

ob_status ob_evaluate(const ob_dataset* data, const ob_fit_options* options, int32_t folds,
                      ob_report** out);
/* Metric names: "test_loglik", "rmse", "rmse.<aspect>", "fcp.<aspect>",
 * "aspect_pearson", "delta_pearson_int", "delta_pearson_avg",
 * "group_sd_fraction". */
ob_status ob_report_metric(const ob_report* report, const char* name, double* out);
ob_status ob_report_write(const ob_report* report, const char* out_dir);
void ob_report_free(ob_report* report);

/* ---- diagnostics ------------------------------------------------------- */

typedef struct ob_diag_options {
  uint64_t seed;
  int32_t quick; /* non-zero shrinks the sample sizes for a fast smoke run */
} ob_diag_options;

void ob_diag_options_init(ob_diag_options* options);
ob_status ob_diagnose(const ob_diag_options* options, const char* report_path,
                      int32_t* out_pass);

/* ---- run manifests ----------------------------------------------------- */

uint64_t ob_bytes_hash(const void* bytes, size_t size);
ob_status ob_write_manifest(const char* command, uint64_t seed, uint64_t dataset_hash,
                            uint64_t config_hash, const char* const* outputs,
                            int32_t num_outputs, const char* path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ORDBIAS_H */
